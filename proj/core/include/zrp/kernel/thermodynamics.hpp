#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "zrp/kernel/rate_function.hpp"

namespace zrp {

// A function of a single-site occupancy.
using SiteFunction = std::function<double(std::int64_t)>;

// mu: the product measure with mean density rho.
// nu: its size-biased version, d nu / d mu = eta(0) / rho, seen from the tagged particle.
enum class Ensemble { kMu, kNu };

struct ThermoOptions {
  // Hard cap on series terms; hitting it throws TruncationInsufficient.
  std::int64_t k_max = 1'000'000;
  // Relative tail tolerance of every truncated series.
  double tol = 1e-14;
  double rho_max = 1e3;
};

// Thermodynamic functions of the single-site marginal
//   mu_phi(k) = phi^k / (Z(phi) g(k)!).
// Series are truncated once the ratio bound phi / g(k+1) <= a phi / (k+1) makes
// the remaining tail (including its first two moments) smaller than tol times
// the partial sums. Immutable; safe to share across threads.
class Thermodynamics {
 public:
  explicit Thermodynamics(RateFunction rate, ThermoOptions options = {});

  const RateFunction& rate() const noexcept { return rate_; }
  const ThermoOptions& options() const noexcept { return options_; }

  double log_partition(double phi) const;
  double partition(double phi) const;
  // rho(phi) = E_{mu_phi}[eta(0)].
  double density(double phi) const;
  // Var_{mu_phi}[eta(0)] = phi d rho / d phi.
  double variance(double phi) const;
  // Inverse of density(); relative accuracy 1e-12.
  double fugacity(double rho) const;
  // phi(rho) / rho, with psi(0) = g(1).
  double psi(double rho) const;

  // E_{mu_rho}[h(eta(0))] or E_{nu_rho}[h(eta(0))]. h may grow at most
  // quadratically for the truncation guarantee to cover it.
  double expectation(const SiteFunction& h, double rho, Ensemble ensemble) const;

  // Single-site probability mass function truncated where the remaining mass
  // falls below `cutoff`.
  std::vector<double> pmf(double rho, Ensemble ensemble, double cutoff = 1e-14) const;

  // Number of series terms used at fugacity phi.
  std::int64_t truncation_index(double phi) const;

 private:
  struct Sums {
    double log_scale = 0.0;
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, sh = 0.0, shk = 0.0;
    std::int64_t terms = 0;
  };
  Sums sum_series(double phi, const SiteFunction* h) const;
  double psi_series_ratio(double phi) const;

  RateFunction rate_;
  ThermoOptions options_;
};

}  // namespace zrp
