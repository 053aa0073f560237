#pragma once

#include <cstdint>
#include <map>
#include <optional>

#include "zrp/dynamics/simulation.hpp"
#include "zrp/kernel/thermodynamics.hpp"

namespace zrp {

// H_l-bar(rho) = E_{mu_rho}[H(eta^l(0))] with H(a) = E_{nu_a}[h]. The block sum
// of 2l+1 iid mu_rho sites is computed exactly by convolving the single-site
// pmf, so no sampling enters. Values are memoized; not thread-safe, use one
// instance per worker.
class BlockSmoothedExpectation {
 public:
  BlockSmoothedExpectation(const Thermodynamics& thermo, SiteFunction h, int l);

  int l() const noexcept { return l_; }
  const SiteFunction& h() const noexcept { return h_; }
  const Thermodynamics& thermo() const noexcept { return thermo_; }

  // H(a).
  double grand(double a) const;
  double operator()(double rho) const;

 private:
  double grand_at_sum(std::int64_t s) const;

  const Thermodynamics& thermo_;
  SiteFunction h_;
  int l_;
  mutable std::map<std::int64_t, double> grand_cache_;
  mutable std::map<double, double> smoothed_cache_;
};

// |int_0^t [h(eta_s(0)) - (1/K) sum_{x=1..K} H_l-bar(eta_s^K(x))] ds| with
// K = round(eps N) and t the last snapshot time. The block term uses the
// trapezoid rule on the snapshots, which must start at the record start and be
// spaced at most eps^2 / 4 apart. When `origin_observable` names an origin
// integral recorded for h, the first term is taken from it exactly; otherwise
// it is integrated on the snapshots as well.
double local_replacement_gap(const TrajectoryRecord& traj, const BlockSmoothedExpectation& hbar, double eps,
                             std::optional<std::size_t> origin_observable = std::nullopt);
double local_replacement_gap(const TrajectoryRecord& traj, const Thermodynamics& thermo, const SiteFunction& h, int l,
                             double eps);

// Time-and-space average over [0, t] and x of
//   | (1/(2L+1)) sum_{|y| <= L} r(eta_s(x + y)) - r-bar(eta_s^L(x)) |,
// r-bar(a) = E_{mu_a}[r], for a single-site function r.
class SiteMean {
 public:
  SiteMean(const Thermodynamics& thermo, SiteFunction r) : thermo_(thermo), r_(std::move(r)) {}
  const SiteFunction& r() const noexcept { return r_; }
  double operator()(double a) const;

 private:
  const Thermodynamics& thermo_;
  SiteFunction r_;
  mutable std::map<double, double> cache_;
};

double global_replacement_gap(const TrajectoryRecord& traj, const SiteMean& rbar, int L);
double global_replacement_gap(const TrajectoryRecord& traj, const Thermodynamics& thermo, const SiteFunction& r,
                              int L);

}  // namespace zrp
