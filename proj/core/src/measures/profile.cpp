#include "zrp/measures/profile.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "zrp/error.hpp"

namespace zrp {

DensityProfile::DensityProfile(std::string name, std::function<double(double)> rho, double bound)
    : name_(std::move(name)), rho_(std::move(rho)), bound_(bound) {
  if (!(bound_ >= 0.0) || !std::isfinite(bound_)) throw Error(Errc::kInvalidArgument, "profile bound must be finite and >= 0");
}

DensityProfile DensityProfile::constant(double value) {
  if (!(value >= 0.0)) throw Error(Errc::kInvalidArgument, "constant profile must be >= 0");
  std::ostringstream name;
  name << "const:" << value;
  return {name.str(), [value](double) { return value; }, value};
}

DensityProfile DensityProfile::cosine(double mean, double amplitude) {
  if (!(mean - std::abs(amplitude) >= 0.0)) throw Error(Errc::kInvalidArgument, "cosine profile must stay >= 0");
  std::ostringstream name;
  name << "cosine:" << mean << ":" << amplitude;
  return {name.str(),
          [mean, amplitude](double u) { return mean + amplitude * std::cos(2.0 * std::numbers::pi * u); },
          mean + std::abs(amplitude)};
}

DensityProfile DensityProfile::step(double lo, double hi) {
  if (!(lo >= 0.0 && hi >= 0.0)) throw Error(Errc::kInvalidArgument, "step profile must be >= 0");
  std::ostringstream name;
  name << "step:" << lo << ":" << hi;
  return {name.str(), [lo, hi](double u) { return u < 0.5 ? lo : hi; }, std::max(lo, hi)};
}

double DensityProfile::operator()(double u) const {
  u -= std::floor(u);
  return rho_(u);
}

DensityProfile parse_profile(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  auto number = [&](std::size_t i) {
    try {
      std::size_t used = 0;
      const double v = std::stod(parts.at(i), &used);
      if (used != parts[i].size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      throw Error(Errc::kUnknownBuiltin, "bad profile '" + text + "'");
    }
  };
  if (parts.size() == 2 && parts[0] == "const") return DensityProfile::constant(number(1));
  if (parts.size() == 3 && parts[0] == "cosine") return DensityProfile::cosine(number(1), number(2));
  if (parts.size() == 3 && parts[0] == "step") return DensityProfile::step(number(1), number(2));
  throw Error(Errc::kUnknownBuiltin, "unknown profile '" + text + "'");
}

}  // namespace zrp
