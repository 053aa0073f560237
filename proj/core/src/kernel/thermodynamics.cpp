#include "zrp/kernel/thermodynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "zrp/error.hpp"

namespace zrp {

namespace {
constexpr double kRescaleAbove = 1e200;
constexpr double kRescaleFactor = 1e-200;
const double kLogRescale = std::log(1e200);
}  // namespace

Thermodynamics::Thermodynamics(RateFunction rate, ThermoOptions options)
    : rate_(std::move(rate)), options_(options) {
  if (!(options_.tol > 0.0) || !(options_.rho_max > 0.0) || options_.k_max < 2)
    throw Error(Errc::kInvalidArgument, "invalid thermodynamics options");
}

Thermodynamics::Sums Thermodynamics::sum_series(double phi, const SiteFunction* h) const {
  if (!(phi >= 0.0) || !std::isfinite(phi)) throw Error(Errc::kOutOfRange, "fugacity must be finite and >= 0");
  Sums s;
  s.s0 = 1.0;
  s.sh = h ? (*h)(0) : 0.0;
  s.terms = 1;
  if (phi == 0.0) return s;

  const double aphi = rate_.a() * phi;
  const double tol = options_.tol;
  double t = 1.0;
  for (std::int64_t k = 1;; ++k) {
    if (k > options_.k_max)
      throw Error(Errc::kTruncationInsufficient, "series tail bound not met within k_max terms", k);
    t *= phi / rate_(k);
    const double kd = static_cast<double>(k);
    s.s0 += t;
    s.s1 += kd * t;
    s.s2 += kd * kd * t;
    if (h) {
      const double hk = (*h)(k);
      s.sh += hk * t;
      s.shk += hk * kd * t;
    }
    s.terms = k + 1;
    if (t > kRescaleAbove) {
      t *= kRescaleFactor;
      s.s0 *= kRescaleFactor;
      s.s1 *= kRescaleFactor;
      s.s2 *= kRescaleFactor;
      s.sh *= kRescaleFactor;
      s.shk *= kRescaleFactor;
      s.log_scale += kLogRescale;
    }
    // Tail after k: t_{k+m} <= t_{k+1} q^{m-1} with q = a phi / (k+2).
    if (kd + 2.0 > aphi) {
      const double q = aphi / (kd + 2.0);
      const double next = t * aphi / (kd + 1.0);
      const double w = 1.0 / (1.0 - q);
      const double tail0 = next * w;
      const double tail1 = next * (kd + 1.0) * w * w;
      const double tail2 = next * (kd + 1.0) * (kd + 1.0) * (1.0 + q) * w * w * w;
      if (tail0 <= tol * s.s0 && tail1 <= tol * s.s1 && tail2 <= tol * s.s2) break;
    }
  }
  return s;
}

double Thermodynamics::log_partition(double phi) const {
  const Sums s = sum_series(phi, nullptr);
  return s.log_scale + std::log(s.s0);
}

double Thermodynamics::partition(double phi) const { return std::exp(log_partition(phi)); }

double Thermodynamics::density(double phi) const {
  const Sums s = sum_series(phi, nullptr);
  return s.s1 / s.s0;
}

double Thermodynamics::variance(double phi) const {
  const Sums s = sum_series(phi, nullptr);
  const double m = s.s1 / s.s0;
  return std::max(0.0, s.s2 / s.s0 - m * m);
}

std::int64_t Thermodynamics::truncation_index(double phi) const { return sum_series(phi, nullptr).terms; }

double Thermodynamics::fugacity(double rho) const {
  if (!(rho >= 0.0) || !std::isfinite(rho)) throw Error(Errc::kOutOfRange, "density must be finite and >= 0");
  if (rho > options_.rho_max) throw Error(Errc::kOutOfRange, "density exceeds rho_max");
  if (rho == 0.0) return 0.0;

  // phi = E[g] and rho = E[k] with k/a <= g(k) <= a k bracket the root.
  const double a = rate_.a();
  double lo = rho / a * (1.0 - 1e-12);
  double hi = rho * a * (1.0 + 1e-12);
  double phi = std::sqrt(lo * hi);
  for (int iter = 0; iter < 200; ++iter) {
    const Sums s = sum_series(phi, nullptr);
    const double mean = s.s1 / s.s0;
    const double var = std::max(s.s2 / s.s0 - mean * mean, std::numeric_limits<double>::min());
    const double resid = mean - rho;
    if (resid == 0.0) return phi;
    (resid > 0.0 ? hi : lo) = phi;
    // Newton in log phi: d rho / d log phi = Var.
    double next = phi * std::exp(-resid / var);
    if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    if (std::abs(next - phi) <= 1e-13 * phi || (hi - lo) <= 1e-14 * hi) return next;
    phi = next;
  }
  return phi;
}

double Thermodynamics::psi_series_ratio(double phi) const {
  // psi = Z / sum_{k>=1} k phi^{k-1} / g(k)!, finite at phi = 0.
  double v = 1.0 / rate_(1);
  double z = 1.0 + phi * v;
  double d = v;
  for (std::int64_t k = 2; k < 10000; ++k) {
    v *= phi / rate_(k);
    z += phi * v;
    d += static_cast<double>(k) * v;
    if (static_cast<double>(k) * v < 1e-17 * d) break;
  }
  return z / d;
}

double Thermodynamics::psi(double rho) const {
  if (!(rho >= 0.0)) throw Error(Errc::kOutOfRange, "density must be >= 0");
  if (rho == 0.0) return rate_(1);
  const double phi = fugacity(rho);
  if (rho < 1e-6) return psi_series_ratio(phi);
  return phi / rho;
}

double Thermodynamics::expectation(const SiteFunction& h, double rho, Ensemble ensemble) const {
  if (rho == 0.0) return ensemble == Ensemble::kMu ? h(0) : h(1);
  const Sums s = sum_series(fugacity(rho), &h);
  return ensemble == Ensemble::kMu ? s.sh / s.s0 : s.shk / s.s1;
}

std::vector<double> Thermodynamics::pmf(double rho, Ensemble ensemble, double cutoff) const {
  if (rho == 0.0) return ensemble == Ensemble::kMu ? std::vector<double>{1.0} : std::vector<double>{0.0, 1.0};
  const double phi = fugacity(rho);
  const double log_phi = std::log(phi);
  const double aphi = rate_.a() * phi;
  const Sums s = sum_series(phi, nullptr);
  const double log_norm = s.log_scale + std::log(ensemble == Ensemble::kMu ? s.s0 : s.s1);

  std::vector<double> p;
  double log_t = 0.0;  // log(phi^k / g(k)!)
  double mass = 0.0;
  for (std::int64_t k = 0;; ++k) {
    if (k > 0) log_t += log_phi - std::log(rate_(k));
    const double weight = ensemble == Ensemble::kMu ? 1.0 : static_cast<double>(k);
    const double pk = k == 0 && ensemble == Ensemble::kNu ? 0.0 : weight * std::exp(log_t - log_norm);
    p.push_back(pk);
    mass += pk;
    const double kd = static_cast<double>(k);
    if (kd + 2.0 > aphi && k > 0) {
      const double q = aphi / (kd + 2.0);
      const double tail = pk * aphi / (kd + 1.0) * (kd + 2.0) / (kd + 1.0) / ((1.0 - q) * (1.0 - q));
      if (tail < cutoff) break;
    }
    if (k > options_.k_max) throw Error(Errc::kTruncationInsufficient, "pmf tail not reached", k);
  }
  for (double& v : p) v /= mass;
  return p;
}

}  // namespace zrp
