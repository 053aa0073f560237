#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "zrp/kernel/rate_function.hpp"
#include "zrp/kernel/thermodynamics.hpp"

namespace zrp {

// Canonical measure on the box Lambda_l = {-l..l} with j particles:
//   mu: weights proportional to 1 / prod_x g(eta(x))!
//   nu: restricted to eta(0) >= 1, weights proportional to eta(0) / prod_x g(eta(x))!
// States are stored flat, site x at offset x + l, in colexicographic order.
struct CanonicalEnsemble {
  int l = 0;
  int j = 0;
  Ensemble ensemble = Ensemble::kNu;
  std::vector<std::int32_t> states;
  std::vector<double> weights;

  std::size_t sites() const noexcept { return static_cast<std::size_t>(2 * l + 1); }
  std::size_t size() const noexcept { return weights.size(); }
  std::span<const std::int32_t> state(std::size_t i) const noexcept {
    return {states.data() + i * sites(), sites()};
  }
  std::int32_t origin(std::size_t i) const noexcept { return states[i * sites() + static_cast<std::size_t>(l)]; }
};

struct CanonicalOptions {
  double state_cap = 1e7;
  // Grand-canonical fugacity the weights are computed at before normalization;
  // the normalized canonical weights do not depend on it.
  double reference_fugacity = 1.0;
};

// C(j + 2l, 2l) for mu, C(j - 1 + 2l, 2l) for nu, as a double.
double canonical_state_count(int l, int j, Ensemble ensemble);

CanonicalEnsemble enumerate_canonical(const RateFunction& rate, int l, int j, Ensemble ensemble,
                                      const CanonicalOptions& options = {});

using BoxFunction = std::function<double(std::span<const std::int32_t>)>;

double canonical_expectation(const CanonicalEnsemble& ensemble, const BoxFunction& h);

// Exact law of eta(0) under the canonical measure, by convolving the single-site
// weights of the other 2l sites. Feasible far beyond the enumeration cap.
std::vector<double> canonical_origin_law(const RateFunction& rate, int l, int j, Ensemble ensemble);

// |E_{nu_{Lambda_l, j}}[h(eta(0))] - E_{nu_{j / (2l+1)}}[h(eta(0))]|.
double equivalence_gap(const Thermodynamics& thermo, int l, int j, const SiteFunction& h);

}  // namespace zrp
