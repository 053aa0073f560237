#pragma once

#include <vector>

#include "zrp/kernel/thermodynamics.hpp"

namespace zrp {

// Values on a uniform grid over [0, hi] with 4-point Lagrange interpolation.
class UniformCubicTable {
 public:
  UniformCubicTable() = default;
  UniformCubicTable(double hi, std::vector<double> values);

  double operator()(double x) const noexcept;
  double hi() const noexcept { return hi_; }
  double spacing() const noexcept { return h_; }
  const std::vector<double>& values() const noexcept { return values_; }

 private:
  double hi_ = 0.0;
  double h_ = 1.0;
  double inv_h_ = 1.0;
  std::vector<double> values_;
};

// Tabulated phi(rho) and psi(rho) for hot loops (PDE stencil, SDE drift).
// Interpolation error is O(spacing^4); densities above rho_hi fall back to
// the exact series inversion. The Thermodynamics object must outlive the table.
class ThermoTable {
 public:
  ThermoTable(const Thermodynamics& thermo, double rho_hi, double spacing = 1e-3);

  double fugacity(double rho) const;
  double psi(double rho) const;
  double rho_hi() const noexcept { return phi_.hi(); }
  // Largest divided difference of phi over the tabulated range.
  double fugacity_lipschitz() const noexcept { return lipschitz_; }
  const Thermodynamics& thermo() const noexcept { return *thermo_; }

 private:
  const Thermodynamics* thermo_;
  UniformCubicTable phi_;
  UniformCubicTable psi_;
  double lipschitz_ = 0.0;
};

}  // namespace zrp
