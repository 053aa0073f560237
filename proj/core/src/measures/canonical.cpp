#include "zrp/measures/canonical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "zrp/error.hpp"

namespace zrp {

namespace {

double log_sum_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

void check_box(int l, int j) {
  if (l < 1) throw Error(Errc::kInvalidArgument, "box half-width l must be >= 1");
  if (j < 0) throw Error(Errc::kInvalidArgument, "particle count must be >= 0");
}

}  // namespace

double canonical_state_count(int l, int j, Ensemble ensemble) {
  const int free = ensemble == Ensemble::kNu ? j - 1 : j;
  if (free < 0) return 0.0;
  const int k = 2 * l;
  // C(free + k, k) in log space.
  return std::round(std::exp(std::lgamma(free + k + 1.0) - std::lgamma(k + 1.0) - std::lgamma(free + 1.0)));
}

CanonicalEnsemble enumerate_canonical(const RateFunction& rate, int l, int j, Ensemble ensemble,
                                      const CanonicalOptions& options) {
  check_box(l, j);
  if (ensemble == Ensemble::kNu && j < 1) throw Error(Errc::kInvalidArgument, "nu canonical ensemble needs j >= 1");
  const double count = canonical_state_count(l, j, ensemble);
  if (count > options.state_cap) throw Error(Errc::kStateSpaceTooLarge, "canonical state space exceeds cap");

  CanonicalEnsemble out;
  out.l = l;
  out.j = j;
  out.ensemble = ensemble;
  const std::size_t n = out.sites();
  const std::size_t origin = static_cast<std::size_t>(l);
  out.states.reserve(static_cast<std::size_t>(count) * n);
  out.weights.reserve(static_cast<std::size_t>(count));

  std::vector<double> log_w;
  log_w.reserve(static_cast<std::size_t>(count));
  const double log_ref = j * std::log(options.reference_fugacity);
  std::vector<std::int32_t> state(n, 0);

  // Last site most significant, each coordinate ascending: colexicographic.
  auto emit = [&] {
    double lw = log_ref;
    for (const auto k : state) lw -= rate.log_g_factorial(k);
    if (ensemble == Ensemble::kNu) lw += std::log(static_cast<double>(state[origin]));
    out.states.insert(out.states.end(), state.begin(), state.end());
    log_w.push_back(lw);
  };
  auto fill = [&](auto&& self, std::size_t pos, int remaining) -> void {
    if (pos == 0) {
      state[0] = remaining;
      if (ensemble == Ensemble::kNu && origin == 0 && remaining < 1) return;
      emit();
      return;
    }
    const int lo = (ensemble == Ensemble::kNu && pos == origin) ? 1 : 0;
    for (int v = lo; v <= remaining; ++v) {
      state[pos] = v;
      self(self, pos - 1, remaining - v);
    }
  };
  fill(fill, n - 1, j);

  const double top = *std::max_element(log_w.begin(), log_w.end());
  double norm = 0.0;
  for (double v : log_w) norm += std::exp(v - top);
  const double log_norm = top + std::log(norm);
  for (double v : log_w) out.weights.push_back(std::exp(v - log_norm));
  return out;
}

double canonical_expectation(const CanonicalEnsemble& ensemble, const BoxFunction& h) {
  double acc = 0.0;
  for (std::size_t i = 0; i < ensemble.size(); ++i) acc += ensemble.weights[i] * h(ensemble.state(i));
  return acc;
}

std::vector<double> canonical_origin_law(const RateFunction& rate, int l, int j, Ensemble ensemble) {
  check_box(l, j);
  if (ensemble == Ensemble::kNu && j < 1) throw Error(Errc::kInvalidArgument, "nu canonical ensemble needs j >= 1");
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  const auto J = static_cast<std::size_t>(j);
  std::vector<double> site(J + 1);
  for (std::size_t k = 0; k <= J; ++k) site[k] = -rate.log_g_factorial(static_cast<std::int64_t>(k));

  // log of the total weight of 2l sites holding n particles.
  std::vector<double> rest(J + 1, kNegInf);
  rest[0] = 0.0;
  for (int s = 0; s < 2 * l; ++s) {
    std::vector<double> next(J + 1, kNegInf);
    for (std::size_t n = 0; n <= J; ++n)
      for (std::size_t k = 0; k <= n; ++k) next[n] = log_sum_exp(next[n], rest[n - k] + site[k]);
    rest = std::move(next);
  }

  std::vector<double> log_p(J + 1, kNegInf);
  for (std::size_t k = 0; k <= J; ++k) {
    if (ensemble == Ensemble::kNu && k == 0) continue;
    log_p[k] = site[k] + rest[J - k] + (ensemble == Ensemble::kNu ? std::log(static_cast<double>(k)) : 0.0);
  }
  const double top = *std::max_element(log_p.begin(), log_p.end());
  std::vector<double> p(J + 1);
  double norm = 0.0;
  for (std::size_t k = 0; k <= J; ++k) norm += (p[k] = std::exp(log_p[k] - top));
  for (double& v : p) v /= norm;
  return p;
}

double equivalence_gap(const Thermodynamics& thermo, int l, int j, const SiteFunction& h) {
  const std::vector<double> law = canonical_origin_law(thermo.rate(), l, j, Ensemble::kNu);
  double canonical = 0.0;
  for (std::size_t k = 0; k < law.size(); ++k) canonical += law[k] * h(static_cast<std::int64_t>(k));
  const double rho = static_cast<double>(j) / (2.0 * l + 1.0);
  return std::abs(canonical - thermo.expectation(h, rho, Ensemble::kNu));
}

}  // namespace zrp
