#pragma once

#include <cstddef>
#include <ostream>
#include <span>
#include <vector>

namespace zrp {

// rho(t_n, i / M) on the unit torus, row-major in time.
struct GridField {
  std::size_t M = 0;
  std::vector<double> times;
  std::vector<double> values;

  double at(std::size_t n, std::size_t i) const noexcept { return values[n * M + i]; }
  std::span<const double> row(std::size_t n) const noexcept { return {values.data() + n * M, M}; }
  double mass(std::size_t n) const noexcept;
  double max_value() const noexcept;
  double final_time() const noexcept { return times.back(); }
};

// Bilinear in (t, u), periodic in u, exact at nodes. Throws OutOfRange for t
// outside [times.front(), times.back()].
double interpolate_density(const GridField& field, double t, double u);

// Repeated lookups at non-decreasing times reuse the last time bracket.
class FieldCursor {
 public:
  explicit FieldCursor(const GridField& field) : field_(&field) {}
  double operator()(double t, double u);

 private:
  const GridField* field_;
  std::size_t n_ = 0;
};

// `t,u,rho` rows.
void write_field_csv(const GridField& field, std::ostream& out);

}  // namespace zrp
