#include <doctest.h>

#include <cmath>
#include <limits>

#include "helpers.hpp"
#include "zrp/analysis/observables.hpp"
#include "zrp/analysis/replacement.hpp"
#include "zrp/analysis/spectral_gap.hpp"
#include "zrp/analysis/statistics.hpp"

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
const JumpKernel nn = JumpKernel::nearest_neighbor();

TestFunction constant_fn(double c) { return {"const", [c](double) { return c; }, std::abs(c), 0.0, 0.0}; }

TrajectoryRecord record_with_snapshots(const Thermodynamics& th, std::size_t N, double T, double spacing, bool events,
                                       std::uint64_t seed, std::vector<OriginObservable> obs = {}) {
  SimulationState s = init_state(th, nn, DensityProfile::cosine(1.0, 0.5), N, seed);
  RecordSpec spec = uniform_record(T, 10);
  const auto n = static_cast<std::size_t>(std::ceil(T / spacing - 1e-9));
  for (std::size_t i = 0; i <= n; ++i) spec.snapshot_times.push_back(i == n ? T : T * i / n);
  spec.keep_events = events;
  spec.origin_observables = std::move(obs);
  return simulate(s, nn, T, spec);
}

}  // namespace

TEST_CASE("empirical measure") {
  Configuration c;
  c.occ = {1, 0, 3, 2, 0, 4, 1, 1};
  c.tagged_site = 5;
  c.total = 12;
  CHECK(empirical_measure(c, constant_fn(1.0), false) == doctest::Approx(12.0 / 8.0));
  CHECK(empirical_measure(c, constant_fn(1.0), true) == doctest::Approx(12.0 / 8.0));
  Configuration flat;
  flat.occ.assign(16, 3);
  flat.tagged_site = 2;
  const TestFunction G = fourier_mode(1, false);
  double mean = 0.0;
  for (int x = 0; x < 16; ++x) mean += G(x / 16.0) / 16.0;
  CHECK(empirical_measure(flat, G, false) == doctest::Approx(3.0 * mean).epsilon(1e-12));
}

TEST_CASE("shift identity on snapshots") {
  const TrajectoryRecord r = record_with_snapshots(perturbed(), 40, 0.02, 0.005, false, 4);
  for (const auto& snap : r.snapshots) {
    Configuration c;
    c.occ = snap.occ;
    c.tagged_site = snap.tagged_site;
    const double N = 40.0, X = static_cast<double>(snap.tagged_site);
    for (const auto& G : fourier_test_functions(3)) {
      // Same terms summed in the same order.
      double plain = 0.0;
      for (std::size_t y = 0; y < c.occ.size(); ++y) {
        const std::size_t x = (y + c.occ.size() - snap.tagged_site) % c.occ.size();
        plain += G(static_cast<double>(x) / N) * c.occ[(x + snap.tagged_site) % c.occ.size()];
      }
      (void)X;
      const TestFunction shifted{G.name, [&, X](double u) { return G(u - X / N); }, 1.0, 0.0, 0.0};
      CHECK(empirical_measure(c, G, true) == doctest::Approx(plain / N).epsilon(1e-13));
      CHECK(empirical_measure(c, G, true) == doctest::Approx(empirical_measure(c, shifted, false)).epsilon(1e-12));
    }
  }
}

TEST_CASE("block averages") {
  const std::vector<std::int32_t> occ{5, 1, 2, 3, 7, 0, 4};
  CHECK(block_average(occ, 2, 1) == doctest::Approx(2.0));
  CHECK(block_average(occ, 0, 3) == doctest::Approx(22.0 / 7.0));
  CHECK(block_average(occ, 6, 1) == doctest::Approx(3.0));
  const std::vector<std::int32_t> flat(9, 4);
  for (int l = 0; l <= 4; ++l)
    for (int x = 0; x < 9; ++x) CHECK(block_average(flat, x, l) == 4.0);
  CHECK(error_code_of([&] { block_average(occ, 0, 4); }) == Errc::kInvalidArgument);
}

TEST_CASE("discrete derivatives") {
  const TestFunction G = fourier_mode(2, true);
  const double u = 0.3;
  CHECK(discrete_laplacian(G, nn, 1000, u) == doctest::Approx(-0.5 * G.d2_bound * G(u)).epsilon(1e-4));
  CHECK(discrete_gradient(G, 1000, 1, u) == doctest::Approx(G.d1_bound * std::cos(G.d1_bound * u)).epsilon(1e-2));
}

TEST_CASE("field martingale: constant test function and lone particle") {
  const TrajectoryRecord r = record_with_snapshots(perturbed(), 24, 0.05, 0.05, true, 3);
  for (double m : field_martingale(r, constant_fn(2.0), nn, perturbed().rate())) CHECK(m == 0.0);

  SimulationState s = init_state(perturbed(), nn, DensityProfile::constant(0.0), 16, 8);
  RecordSpec spec = uniform_record(0.5, 25);
  spec.keep_events = true;
  const TrajectoryRecord lone = simulate(s, nn, 0.5, spec);
  REQUIRE(lone.events.size() > 10);
  // In the tagged frame the walker never leaves the origin and the three
  // compensator terms cancel.
  for (const auto& G : fourier_test_functions(2))
    for (double m : field_martingale(lone, G, nn, perturbed().rate())) CHECK(std::abs(m) <= 1e-12);
}

TEST_CASE("field martingale is centred") {
  const TestFunction G = fourier_mode(1, false);
  std::vector<double> finals;
  for (std::uint64_t i = 0; i < 500; ++i) {
    SimulationState s = init_state(perturbed(), nn, DensityProfile::cosine(1.0, 0.5), 32, stream_seed(41, i));
    RecordSpec spec = uniform_record(0.1, 2);
    spec.keep_events = true;
    finals.push_back(field_martingale(simulate(s, nn, 0.1, spec), G, nn, perturbed().rate()).back());
  }
  const SampleStats st = describe(finals);
  CHECK(std::abs(st.mean) <= 3.0 * st.mean_se);
}

TEST_CASE("field martingale preconditions") {
  const TrajectoryRecord r = record_with_snapshots(perturbed(), 24, 0.01, 0.01, false, 3);
  CHECK(error_code_of([&] { field_martingale(r, fourier_mode(1, false), nn, perturbed().rate()); }) ==
        Errc::kInvalidArgument);
  CHECK(error_code_of([&] { field_martingale(r, fourier_mode(1, false), JumpKernel::uniform(2), perturbed().rate()); }) ==
        Errc::kUnsupportedKernel);
}

TEST_CASE("local replacement gap degenerate cases") {
  const double eps = 0.25, spacing = eps * eps / 4.0;
  const SiteFunction c = [](std::int64_t) { return 0.7; };
  const TrajectoryRecord r = record_with_snapshots(perturbed(), 32, 0.05, spacing, false, 6, {{"c", c}});
  CHECK(local_replacement_gap(r, perturbed(), c, 2, eps) <= 1e-14);
  CHECK(local_replacement_gap(r, BlockSmoothedExpectation(perturbed(), c, 2), eps, 0) <= 1e-14);

  const auto& g = linear().rate();
  const SiteFunction h0 = [&](std::int64_t k) { return k == 0 ? 0.0 : g(k) / static_cast<double>(k); };
  const TrajectoryRecord lr = record_with_snapshots(linear(), 32, 0.05, spacing, false, 6, {{"h0", h0}});
  CHECK(local_replacement_gap(lr, BlockSmoothedExpectation(linear(), h0, 3), eps, 0) <= 1e-12);

  const TrajectoryRecord sparse = record_with_snapshots(perturbed(), 32, 0.05, 0.05, false, 6);
  CHECK(error_code_of([&] { local_replacement_gap(sparse, perturbed(), c, 2, eps); }) == Errc::kInsufficientSnapshots);
}

TEST_CASE("block-smoothed expectation") {
  // For g(k) = k, H(a) = E_nu_a[min(k, 5)] and the outer law of the block
  // density is a scaled Poisson: compare against a direct sum.
  const SiteFunction h = [](std::int64_t k) { return static_cast<double>(std::min<std::int64_t>(k, 5)); };
  const BlockSmoothedExpectation hbar(linear(), h, 2);
  const double rho = 0.8, lambda = 5 * rho;
  double direct = 0.0, p = std::exp(-lambda);
  for (int s = 0; s < 80; ++s) {
    direct += p * linear().expectation(h, s / 5.0, Ensemble::kNu);
    p *= lambda / (s + 1);
  }
  CHECK(hbar(rho) == doctest::Approx(direct).epsilon(1e-12));
  CHECK(hbar(0.0) == 1.0);
  const BlockSmoothedExpectation none(perturbed(), h, 0);
  CHECK(none(1.3) == doctest::Approx(perturbed().expectation([&](std::int64_t k) {
    return none.grand(static_cast<double>(k));
  }, 1.3, Ensemble::kMu)).epsilon(1e-12));
}

TEST_CASE("global replacement gap degenerate cases") {
  const TrajectoryRecord r = record_with_snapshots(perturbed(), 48, 0.02, 0.004, false, 7);
  const SiteFunction c = [](std::int64_t) { return 1.25; };
  CHECK(global_replacement_gap(r, perturbed(), c, 3) <= 1e-14);
  const SiteFunction id = [](std::int64_t k) { return static_cast<double>(k); };
  CHECK(global_replacement_gap(r, perturbed(), id, 3) <= 1e-10);
  TrajectoryRecord none = r;
  none.snapshots.clear();
  CHECK(error_code_of([&] { global_replacement_gap(none, perturbed(), id, 3); }) == Errc::kInsufficientSnapshots);
}

TEST_CASE("spectral gap: single state and three-state box") {
  const auto& g = linear().rate();
  CHECK(spectral_gap(g, nn, 1, 1).gap == std::numeric_limits<double>::infinity());

  const EnvironmentGenerator gen = environment_generator(g, nn, 1, 2);
  REQUIRE(gen.size() == 3);
  std::size_t a = 3;
  for (std::size_t i = 0; i < 3; ++i)
    if (gen.ensemble.origin(i) == 2) a = i;
  REQUIRE(a < 3);
  // From (0,2,0) the environment particle leaves at rate 2 * (1/2) * 1/2 per side.
  for (std::size_t k = 0; k < 3; ++k) {
    if (k == a) {
      CHECK(gen.at(a, a) == doctest::Approx(-1.0));
    } else {
      CHECK(gen.at(a, k) == doctest::Approx(0.5));
      CHECK(gen.at(k, a) == doctest::Approx(0.5));
      CHECK(gen.at(k, k) == doctest::Approx(-0.5));
    }
  }
  // -L = [[1, -1/2, -1/2], [-1/2, 1/2, 0], [-1/2, 0, 1/2]] has spectrum {0, 1/2, 3/2}.
  const SpectralGapResult r = spectral_gap(g, nn, 1, 2);
  CHECK(r.gap == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.states == 3);
  CHECK(r.reversibility_residual < 1e-10);
}

TEST_CASE("spectral gap positivity, reversibility and scale") {
  for (const Thermodynamics* th : {&linear(), &perturbed()}) {
    double base = 0.0;
    for (int l = 1; l <= 2; ++l) {
      double min_j = std::numeric_limits<double>::infinity();
      for (int j = 2; j <= 6; ++j) {
        const SpectralGapResult r = spectral_gap(th->rate(), nn, l, j);
        CHECK(r.gap > 0.0);
        CHECK(r.reversibility_residual < 1e-10);
        min_j = std::min(min_j, r.gap);
      }
      if (l == 1) base = min_j;
      CHECK(min_j * l * l >= 0.1 * base);
    }
  }
  const SpectralGapResult wide = spectral_gap(perturbed().rate(), JumpKernel::uniform(2), 2, 4);
  CHECK(wide.gap > 0.0);
  CHECK(wide.reversibility_residual < 1e-10);
  SpectralGapOptions small;
  small.state_cap = 10;
  CHECK(error_code_of([&] { spectral_gap(linear().rate(), nn, 2, 6, small); }) == Errc::kStateSpaceTooLarge);
  CHECK(error_code_of([&] { spectral_gap(linear().rate(), JumpKernel::uniform(2), 1, 3); }) == Errc::kInvalidArgument);
}

TEST_CASE("Kolmogorov-Smirnov distance") {
  const std::vector<double> a{0.1, 0.5, 0.2, 0.9};
  CHECK(ks_distance(a, a) == 0.0);
  CHECK(ks_distance(a, std::vector<double>{2.0, 3.0}) == 1.0);
  CHECK(error_code_of([&] { ks_distance(a, std::vector<double>{}); }) == Errc::kEmptySample);
  Rng r1(1), r2(2);
  std::vector<double> x(10'000), y(10'000);
  for (auto& v : x) v = r1.normal();
  for (auto& v : y) v = r2.normal();
  CHECK(ks_distance(x, y) < ks_critical_value(1e-3, x.size(), y.size()));
  CHECK(ks_critical_value(0.01, 1000, 100'000) == doctest::Approx(0.0517).epsilon(1e-3));
}

TEST_CASE("ensemble summaries") {
  TrajectoryRecord a;
  a.times = {0.0, 1.0};
  a.x = {0.0, 2.0};
  a.qv = {0.0, 1.0};
  TrajectoryRecord b = a;
  const std::vector<TrajectoryRecord> same{a, b};
  const EnsembleSummary s = ensemble_summary(same, position_series());
  CHECK(s.variance[1] == 0.0);
  b.x = {0.0, 4.0};
  const EnsembleSummary m = ensemble_summary(std::vector<TrajectoryRecord>{a, b}, position_series());
  CHECK(m.mean[1] == 3.0);
  CHECK(m.quantiles[2][1] == 3.0);
  CHECK(m.n_runs == 2);
  TrajectoryRecord c = a;
  c.times = {0.0, 0.5};
  CHECK(error_code_of([&] { ensemble_summary(std::vector<TrajectoryRecord>{a, c}, position_series()); }) ==
        Errc::kGridMismatch);
  CHECK(error_code_of([&] { ensemble_summary(std::vector<TrajectoryRecord>{a}, position_series()); }) ==
        Errc::kInvalidArgument);

  Rng rng(3);
  std::vector<std::vector<double>> draws(10'000);
  for (auto& d : draws) d = {rng.exponential(1.0)};
  const EnsembleSummary e = ensemble_summary({1.0}, draws);
  CHECK(std::abs(e.mean[0] - 1.0) <= 3.0 * e.mean_se[0]);
  CHECK(std::abs(e.variance[0] - 1.0) <= 3.0 * e.variance_se[0]);
  CHECK(e.quantiles[2][0] == doctest::Approx(std::log(2.0)).epsilon(0.05));
}
