#include "zrp/analysis/spectral_gap.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "zrp/error.hpp"

namespace zrp {

EnvironmentGenerator environment_generator(const RateFunction& rate, const JumpKernel& kernel, int l, int j,
                                           std::size_t state_cap) {
  if (l < kernel.range()) throw Error(Errc::kInvalidArgument, "box half-width below the kernel range");
  CanonicalOptions copts;
  copts.state_cap = state_cap;
  EnvironmentGenerator gen{enumerate_canonical(rate, l, j, Ensemble::kNu, copts), {}};
  const std::size_t n = gen.size();
  const std::size_t sites = gen.ensemble.sites();
  std::map<std::vector<std::int32_t>, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) {
    const auto s = gen.ensemble.state(i);
    index.emplace(std::vector<std::int32_t>(s.begin(), s.end()), i);
  }
  gen.Q.assign(n * n, 0.0);
  std::vector<std::int32_t> eta(sites);
  for (std::size_t i = 0; i < n; ++i) {
    const auto s = gen.ensemble.state(i);
    for (std::size_t a = 0; a < sites; ++a) {
      if (s[a] == 0) continue;
      const int x = static_cast<int>(a) - l;
      const double base = x == 0 ? rate(s[a]) * (s[a] - 1) / s[a] : rate(s[a]);
      if (base == 0.0) continue;
      for (const auto& [z, p] : kernel.support()) {
        const int y = x + z;
        if (y < -l || y > l) continue;
        eta.assign(s.begin(), s.end());
        --eta[a];
        ++eta[static_cast<std::size_t>(y + l)];
        const std::size_t k = index.at(eta);
        gen.Q[i * n + k] += p * base;
        gen.Q[i * n + i] -= p * base;
      }
    }
  }
  return gen;
}

double reversibility_residual(const EnvironmentGenerator& gen) {
  const std::size_t n = gen.size();
  const auto& w = gen.ensemble.weights;
  double worst = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      if (i == k) continue;
      scale = std::max(scale, w[i] * std::abs(gen.at(i, k)));
      worst = std::max(worst, std::abs(w[i] * gen.at(i, k) - w[k] * gen.at(k, i)));
    }
  return scale > 0.0 ? worst / scale : 0.0;
}

SpectralGapResult spectral_gap(const RateFunction& rate, const JumpKernel& kernel, int l, int j,
                               const SpectralGapOptions& options) {
  const EnvironmentGenerator gen = environment_generator(rate, kernel, l, j, options.state_cap);
  SpectralGapResult result;
  result.states = gen.size();
  result.reversibility_residual = reversibility_residual(gen);
  if (result.reversibility_residual >= options.reversibility_tol)
    throw Error(Errc::kNotReversible, "generator fails detailed balance");
  if (result.states == 1) {
    result.gap = std::numeric_limits<double>::infinity();
    return result;
  }
  const auto n = static_cast<Eigen::Index>(gen.size());
  const auto& w = gen.ensemble.weights;
  Eigen::MatrixXd S(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = 0; k < n; ++k) {
      const auto ui = static_cast<std::size_t>(i), uk = static_cast<std::size_t>(k);
      S(i, k) = -std::sqrt(w[ui] / w[uk]) * gen.at(ui, uk);
    }
  const Eigen::MatrixXd sym = 0.5 * (S + S.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error(Errc::kInvalidArgument, "eigensolver did not converge");
  // The box dynamics is irreducible on the canonical states, so the kernel of
  // -L is one-dimensional.
  result.gap = solver.eigenvalues()(1);
  return result;
}

}  // namespace zrp
