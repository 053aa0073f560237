#pragma once

#include <cstdint>
#include <vector>

#include "zrp/dynamics/configuration.hpp"
#include "zrp/kernel/thermodynamics.hpp"
#include "zrp/measures/profile.hpp"
#include "zrp/rng.hpp"

namespace zrp {

// Inverse-CDF sampler for one single-site marginal (mu_rho or nu_rho), built
// from the truncated series pmf with a 1e-14 tail cutoff.
class MarginalSampler {
 public:
  MarginalSampler(const Thermodynamics& thermo, double rho, Ensemble ensemble);

  std::int32_t operator()(Rng& rng) const;
  const std::vector<double>& cdf() const noexcept { return cdf_; }

 private:
  std::vector<double> cdf_;
};

std::int32_t sample_mu_marginal(const Thermodynamics& thermo, double rho, Rng& rng);
// Size-biased draw; rho = 0 gives exactly one particle.
std::int32_t sample_nu_origin(const Thermodynamics& thermo, double rho, Rng& rng);

enum class View { kPlain, kTagged };

// Independent occupancies with site-x marginal mu_{rho0(x/N)}. In the tagged
// view the origin is drawn from nu_{rho0(0)} and the tagged particle sits at 0.
Configuration sample_local_equilibrium(const Thermodynamics& thermo, const DensityProfile& profile, std::size_t N,
                                       View view, Rng& rng);

}  // namespace zrp
