#include "zrp/kernel/thermo_table.hpp"

#include <algorithm>
#include <cmath>

#include "zrp/error.hpp"

namespace zrp {

UniformCubicTable::UniformCubicTable(double hi, std::vector<double> values) : hi_(hi), values_(std::move(values)) {
  if (values_.size() < 4 || !(hi > 0.0)) throw Error(Errc::kInvalidArgument, "cubic table needs >= 4 nodes on (0, hi]");
  h_ = hi / static_cast<double>(values_.size() - 1);
  inv_h_ = 1.0 / h_;
}

double UniformCubicTable::operator()(double x) const noexcept {
  const auto n = static_cast<std::ptrdiff_t>(values_.size());
  const double s = x * inv_h_;
  auto i = static_cast<std::ptrdiff_t>(std::floor(s));
  i = std::clamp<std::ptrdiff_t>(i, 0, n - 2);
  // Stencil i-1..i+2, shifted inward at the ends.
  const std::ptrdiff_t base = std::clamp<std::ptrdiff_t>(i - 1, 0, n - 4);
  const double t = s - static_cast<double>(base);
  const double* f = values_.data() + base;
  const double t0 = t, t1 = t - 1.0, t2 = t - 2.0, t3 = t - 3.0;
  return -f[0] * t1 * t2 * t3 / 6.0 + f[1] * t0 * t2 * t3 / 2.0 - f[2] * t0 * t1 * t3 / 2.0 +
         f[3] * t0 * t1 * t2 / 6.0;
}

ThermoTable::ThermoTable(const Thermodynamics& thermo, double rho_hi, double spacing) : thermo_(&thermo) {
  if (!(rho_hi > 0.0) || !(spacing > 0.0)) throw Error(Errc::kInvalidArgument, "thermo table range must be positive");
  const auto intervals = static_cast<std::size_t>(std::max(3.0, std::ceil(rho_hi / spacing)));
  std::vector<double> phi(intervals + 1), psi(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i) {
    const double rho = rho_hi * static_cast<double>(i) / static_cast<double>(intervals);
    phi[i] = thermo.fugacity(rho);
    psi[i] = thermo.psi(rho);
  }
  const double h = rho_hi / static_cast<double>(intervals);
  for (std::size_t i = 0; i < intervals; ++i) lipschitz_ = std::max(lipschitz_, (phi[i + 1] - phi[i]) / h);
  phi_ = UniformCubicTable(rho_hi, std::move(phi));
  psi_ = UniformCubicTable(rho_hi, std::move(psi));
}

double ThermoTable::fugacity(double rho) const {
  if (rho >= 0.0 && rho <= phi_.hi()) return phi_(rho);
  return thermo_->fugacity(rho);
}

double ThermoTable::psi(double rho) const {
  if (rho >= 0.0 && rho <= psi_.hi()) return psi_(rho);
  return thermo_->psi(rho);
}

}  // namespace zrp
