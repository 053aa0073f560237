#include "zrp/measures/samplers.hpp"

#include <algorithm>
#include <map>

#include "zrp/error.hpp"

namespace zrp {

MarginalSampler::MarginalSampler(const Thermodynamics& thermo, double rho, Ensemble ensemble) {
  const std::vector<double> p = thermo.pmf(rho, ensemble);
  cdf_.resize(p.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    acc += p[k];
    cdf_[k] = acc;
  }
}

std::int32_t MarginalSampler::operator()(Rng& rng) const {
  const double u = rng.uniform() * cdf_.back();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  const auto k = static_cast<std::int32_t>(std::min<std::ptrdiff_t>(it - cdf_.begin(), static_cast<std::ptrdiff_t>(cdf_.size()) - 1));
  return k;
}

std::int32_t sample_mu_marginal(const Thermodynamics& thermo, double rho, Rng& rng) {
  if (rho == 0.0) return 0;
  return MarginalSampler(thermo, rho, Ensemble::kMu)(rng);
}

std::int32_t sample_nu_origin(const Thermodynamics& thermo, double rho, Rng& rng) {
  if (rho == 0.0) return 1;
  return MarginalSampler(thermo, rho, Ensemble::kNu)(rng);
}

Configuration sample_local_equilibrium(const Thermodynamics& thermo, const DensityProfile& profile, std::size_t N,
                                       View view, Rng& rng) {
  if (N == 0) throw Error(Errc::kInvalidArgument, "torus size must be positive");
  std::map<double, MarginalSampler> mu_tables;
  Configuration config;
  config.occ.resize(N);
  for (std::size_t x = 0; x < N; ++x) {
    const double rho = profile(static_cast<double>(x) / static_cast<double>(N));
    std::int32_t k;
    if (x == 0 && view == View::kTagged) {
      k = sample_nu_origin(thermo, rho, rng);
    } else if (rho == 0.0) {
      k = 0;
    } else {
      auto it = mu_tables.find(rho);
      if (it == mu_tables.end()) it = mu_tables.emplace(rho, MarginalSampler(thermo, rho, Ensemble::kMu)).first;
      k = it->second(rng);
    }
    config.occ[x] = k;
    config.total += k;
  }
  if (view == View::kTagged) config.tagged_site = 0;
  return config;
}

}  // namespace zrp
