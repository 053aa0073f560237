#pragma once

#include <functional>
#include <string>

namespace zrp {

// Initial macroscopic density rho_0 on the unit torus.
class DensityProfile {
 public:
  DensityProfile(std::string name, std::function<double(double)> rho, double bound);

  static DensityProfile constant(double value);
  // mean + amplitude * cos(2 pi u).
  static DensityProfile cosine(double mean, double amplitude);
  // lo on [0, 1/2), hi on [1/2, 1).
  static DensityProfile step(double lo, double hi);

  // Evaluates at u reduced modulo 1.
  double operator()(double u) const;
  double bound() const noexcept { return bound_; }
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
  std::function<double(double)> rho_;
  double bound_;
};

// Resolves `const:<v>`, `cosine:<mean>:<amp>` or `step:<lo>:<hi>`.
DensityProfile parse_profile(const std::string& text);

}  // namespace zrp
