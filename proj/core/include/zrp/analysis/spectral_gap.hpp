#pragma once

#include <cstddef>
#include <vector>

#include "zrp/kernel/jump_kernel.hpp"
#include "zrp/measures/canonical.hpp"

namespace zrp {

struct SpectralGapOptions {
  std::size_t state_cap = 20'000;
  double reversibility_tol = 1e-10;
};

// Localized environment generator on the nu-canonical states of the box.
struct EnvironmentGenerator {
  CanonicalEnsemble ensemble;
  // Row-major, rows sum to zero.
  std::vector<double> Q;
  std::size_t size() const noexcept { return ensemble.size(); }
  double at(std::size_t i, std::size_t k) const { return Q[i * size() + k]; }
};

// Jumps x -> y inside the box at rate p(y - x) g(eta(x)) for x != 0, and from
// the origin at rate p(z) g(eta(0)) (eta(0) - 1) / eta(0), so the tagged
// particle never leaves it. Jumps leaving the box are suppressed.
EnvironmentGenerator environment_generator(const RateFunction& rate, const JumpKernel& kernel, int l, int j,
                                           std::size_t state_cap = 20'000);

// max |w_i Q_ik - w_k Q_ki| relative to max w_i |Q_ik|.
double reversibility_residual(const EnvironmentGenerator& gen);

struct SpectralGapResult {
  // +inf for a single state.
  double gap = 0.0;
  std::size_t states = 0;
  double reversibility_residual = 0.0;
};

// Smallest nonzero eigenvalue of -L after the sqrt(weights) similarity
// transform. Throws NotReversible when detailed balance fails.
SpectralGapResult spectral_gap(const RateFunction& rate, const JumpKernel& kernel, int l, int j,
                               const SpectralGapOptions& options = {});

}  // namespace zrp
