#include <doctest.h>

#include <cmath>
#include <map>

#include "helpers.hpp"
#include "zrp/measures/canonical.hpp"
#include "zrp/measures/profile.hpp"
#include "zrp/measures/samplers.hpp"

using namespace zrp;
using zrp::test::error_code_of;

namespace {

const Thermodynamics& linear() {
  static const Thermodynamics th(validate_rate(linear_rate()));
  return th;
}
const Thermodynamics& perturbed() {
  static const Thermodynamics th(validate_rate(linear_perturbed_rate()));
  return th;
}

}  // namespace

TEST_CASE("profiles") {
  const DensityProfile c = DensityProfile::cosine(1.0, 0.5);
  CHECK(c(0.0) == doctest::Approx(1.5));
  CHECK(c(1.25) == doctest::Approx(c(0.25)));
  CHECK(c.bound() == doctest::Approx(1.5));
  const DensityProfile s = parse_profile("step:0.5:2");
  CHECK(s(0.1) == 0.5);
  CHECK(s(0.75) == 2.0);
  CHECK(parse_profile("const:3")(0.4) == 3.0);
  CHECK(error_code_of([] { parse_profile("gauss:1"); }) == Errc::kUnknownBuiltin);
}

TEST_CASE("mu marginal sampler") {
  Rng rng(11);
  CHECK(sample_mu_marginal(linear(), 0.0, rng) == 0);
  const MarginalSampler poisson(linear(), 2.0, Ensemble::kMu);
  const int n = 1'000'000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double k = poisson(rng);
    sum += k;
    sq += k * k;
  }
  const double mean = sum / n, se = std::sqrt((sq / n - mean * mean) / n);
  CHECK(std::abs(mean - 2.0) <= 3.0 * se);
}

TEST_CASE("mu marginal matches the series pmf") {
  Rng rng(12);
  const double rho = 1.0;
  const auto pmf = perturbed().pmf(rho, Ensemble::kMu);
  const MarginalSampler s(perturbed(), rho, Ensemble::kMu);
  const int n = 1'000'000;
  std::map<int, int> counts;
  for (int i = 0; i < n; ++i) ++counts[s(rng)];
  // Pool the tail into the last bin with expected count >= 5.
  double chi2 = 0.0, tail_expected = 0.0, tail_observed = 0.0;
  int bins = 0;
  for (std::size_t k = 0; k < pmf.size(); ++k) {
    const double e = n * pmf[k];
    const double o = counts.count(static_cast<int>(k)) ? counts[static_cast<int>(k)] : 0;
    if (e >= 5.0) {
      chi2 += (o - e) * (o - e) / e;
      ++bins;
    } else {
      tail_expected += e;
      tail_observed += o;
    }
  }
  for (const auto& [k, c] : counts)
    if (static_cast<std::size_t>(k) >= pmf.size()) tail_observed += c;
  if (tail_expected > 0.0) {
    chi2 += (tail_observed - tail_expected) * (tail_observed - tail_expected) / tail_expected;
    ++bins;
  }
  CHECK(chi2 < zrp::test::chi2_critical_1e3(bins - 1));
}

TEST_CASE("size-biased origin sampler") {
  Rng rng(13);
  CHECK(sample_nu_origin(perturbed(), 0.0, rng) == 1);
  const int n = 200'000;
  double sum = 0.0, sq = 0.0;
  int below = 0;
  for (int i = 0; i < n; ++i) {
    const double k = sample_nu_origin(linear(), 2.0, rng);
    below += k < 1;
    sum += k;
    sq += k * k;
  }
  const double mean = sum / n, se = std::sqrt((sq / n - mean * mean) / n);
  CHECK(below == 0);
  CHECK(std::abs(mean - 3.0) <= 3.0 * se);
  for (int i = 0; i < 10'000; ++i) CHECK(sample_nu_origin(perturbed(), 0.3, rng) >= 1);
}

TEST_CASE("local equilibrium configurations") {
  Rng rng(14);
  const Configuration empty = sample_local_equilibrium(linear(), DensityProfile::constant(0.0), 64, View::kPlain, rng);
  CHECK(empty.total == 0);
  CHECK_FALSE(empty.tagged_site.has_value());
  for (int i = 0; i < 200; ++i) {
    const Configuration c = sample_local_equilibrium(perturbed(), DensityProfile::constant(0.4), 16, View::kTagged, rng);
    CHECK(c.tagged_site == std::optional<std::size_t>(0));
    CHECK(c.occ[0] >= 1);
  }
}

TEST_CASE("windowed density tracks the profile") {
  Rng rng(15);
  const std::size_t N = 512, w = 32;
  const DensityProfile prof = DensityProfile::cosine(1.0, 0.5);
  const Configuration c = sample_local_equilibrium(linear(), prof, N, View::kPlain, rng);
  for (std::size_t b = 0; b < N / w; ++b) {
    double observed = 0.0, expected = 0.0;
    for (std::size_t x = b * w; x < (b + 1) * w; ++x) {
      observed += c.occ[x];
      expected += prof(static_cast<double>(x) / N);
    }
    // Poisson sites: the window variance equals its mean.
    CHECK(std::abs(observed - expected) <= 3.0 * std::sqrt(expected));
  }
}

TEST_CASE("canonical enumeration by hand") {
  const RateFunction& g = linear().rate();
  const CanonicalEnsemble one = enumerate_canonical(g, 1, 1, Ensemble::kNu);
  REQUIRE(one.size() == 1);
  CHECK(one.origin(0) == 1);
  CHECK(one.state(0)[0] == 0);
  CHECK(one.state(0)[2] == 0);
  CHECK(one.weights[0] == doctest::Approx(1.0));

  const CanonicalEnsemble two = enumerate_canonical(g, 1, 2, Ensemble::kNu);
  REQUIRE(two.size() == 3);
  int doubles = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(two.weights[i] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    doubles += two.origin(i) == 2;
  }
  CHECK(doubles == 1);
  const BoxFunction origin = [](std::span<const std::int32_t> s) { return static_cast<double>(s[1]); };
  CHECK(canonical_expectation(two, origin) == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  CHECK(canonical_expectation(one, origin) == doctest::Approx(1.0));

  const CanonicalEnsemble mu = enumerate_canonical(g, 1, 1, Ensemble::kMu);
  REQUIRE(mu.size() == 3);
  for (double w : mu.weights) CHECK(w == doctest::Approx(1.0 / 3.0));
  const BoxFunction c = [](std::span<const std::int32_t>) { return -1.5; };
  CHECK(canonical_expectation(enumerate_canonical(perturbed().rate(), 2, 4, Ensemble::kMu), c) ==
        doctest::Approx(-1.5).epsilon(1e-14));
}

TEST_CASE("canonical ensemble invariants") {
  const RateFunction& g = perturbed().rate();
  for (int l : {1, 2}) {
    for (int j : {1, 3, 5}) {
      for (Ensemble e : {Ensemble::kMu, Ensemble::kNu}) {
        const CanonicalEnsemble a = enumerate_canonical(g, l, j, e);
        CHECK(static_cast<double>(a.size()) == doctest::Approx(canonical_state_count(l, j, e)));
        double mass = 0.0;
        for (double w : a.weights) mass += w;
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-14));
        if (e == Ensemble::kNu)
          for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.origin(i) >= 1);
        CanonicalOptions other;
        other.reference_fugacity = 3.7;
        const CanonicalEnsemble b = enumerate_canonical(g, l, j, e, other);
        REQUIRE(b.size() == a.size());
        CHECK(b.states == a.states);
        for (std::size_t i = 0; i < a.size(); ++i)
          CHECK(b.weights[i] == doctest::Approx(a.weights[i]).epsilon(1e-14));
      }
    }
  }
  CanonicalOptions tiny;
  tiny.state_cap = 100;
  CHECK(error_code_of([&] { enumerate_canonical(g, 3, 10, Ensemble::kMu, tiny); }) == Errc::kStateSpaceTooLarge);
}

TEST_CASE("origin law by convolution matches enumeration") {
  for (const Thermodynamics* th : {&linear(), &perturbed()}) {
    for (Ensemble e : {Ensemble::kMu, Ensemble::kNu}) {
      const int l = 2, j = 6;
      const CanonicalEnsemble ens = enumerate_canonical(th->rate(), l, j, e);
      std::vector<double> law(j + 1, 0.0);
      for (std::size_t i = 0; i < ens.size(); ++i) law[static_cast<std::size_t>(ens.origin(i))] += ens.weights[i];
      const auto conv = canonical_origin_law(th->rate(), l, j, e);
      REQUIRE(conv.size() == law.size());
      for (std::size_t k = 0; k < law.size(); ++k) CHECK(conv[k] == doctest::Approx(law[k]).epsilon(1e-12));
    }
  }
}

TEST_CASE("equivalence of ensembles") {
  const SiteFunction c = [](std::int64_t) { return 4.0; };
  CHECK(equivalence_gap(perturbed(), 3, 7, c) == doctest::Approx(0.0).epsilon(1e-12));
  const SiteFunction id = [](std::int64_t k) { return static_cast<double>(k); };
  CHECK(equivalence_gap(linear(), 1, 2, id) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  // For g(k) = k the canonical origin law is 1 + Binomial(j - 1, 1 / |box|).
  CHECK(equivalence_gap(linear(), 4, 12, id) == doctest::Approx(1.0 / 9.0).epsilon(1e-12));

  const SiteFunction capped = [](std::int64_t k) { return static_cast<double>(std::min<std::int64_t>(k, 5)); };
  for (const Thermodynamics* th : {&linear(), &perturbed()}) {
    auto worst = [&](int l) {
      double w = 0.0;
      for (int j = 1; j <= 4 * l; ++j) w = std::max(w, equivalence_gap(*th, l, j, capped));
      return w;
    };
    CHECK(worst(8) < worst(2));
  }
}
