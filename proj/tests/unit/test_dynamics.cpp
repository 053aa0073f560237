#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "helpers.hpp"
#include "zrp/analysis/observables.hpp"
#include "zrp/analysis/statistics.hpp"
#include "zrp/dynamics/simulation.hpp"
#include "zrp/dynamics/trajectory_io.hpp"

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

double tree_sum(const SimulationState& s) {
  double r = 0.0;
  for (auto k : s.config.occ) r += (*s.rate)(k);
  return r;
}

Configuration single_particle(std::size_t N) {
  Configuration c;
  c.occ.assign(N, 0);
  c.occ[0] = 1;
  c.tagged_site = 0;
  c.total = 1;
  return c;
}

}  // namespace

TEST_CASE("initial state") {
  SimulationState empty = init_state(linear(), nn, DensityProfile::constant(0.0), 32, 1);
  CHECK(empty.config.total == 1);
  CHECK(empty.config.tagged_site == std::optional<std::size_t>(0));
  CHECK(empty.config.occ[0] == 1);
  CHECK(empty.micro_time == 0.0);

  SimulationState s = init_state(perturbed(), nn, DensityProfile::cosine(1.0, 0.5), 128, 2);
  CHECK(s.rate_tree.total() == doctest::Approx(tree_sum(s)).epsilon(1e-14));

  // Totals over seeds: N rho + 1 on average (the origin is size-biased).
  const std::size_t N = 256;
  std::vector<double> totals;
  for (std::uint64_t seed = 0; seed < 200; ++seed)
    totals.push_back(static_cast<double>(init_state(linear(), nn, DensityProfile::constant(1.0), N, seed).config.total));
  const SampleStats t = describe(totals);
  CHECK(std::abs(t.mean - (N + 1.0)) <= 3.0 * t.mean_se);
  CHECK(error_code_of([] { init_state(linear(), nn, DensityProfile::constant(1.0), 2, 0); }) == Errc::kInvalidArgument);
}

TEST_CASE("single particle performs a simple random walk") {
  SimulationState s = make_state(linear().rate(), nn, single_particle(9), 3);
  std::vector<double> taus;
  std::int64_t prev = s.lifted_position;
  for (int i = 0; i < 20'000; ++i) {
    const double qv_before = s.qv_accumulator;
    const EventRecord e = kmc_step(s, nn);
    CHECK(e.tagged);
    CHECK(std::abs(s.lifted_position - prev) == 1);
    CHECK(std::abs(s.qv_accumulator - qv_before - e.tau) <= 1e-12 * std::max(1.0, s.qv_accumulator));
    prev = s.lifted_position;
    taus.push_back(e.tau);
  }
  const SampleStats st = describe(taus);
  CHECK(std::abs(st.mean - 1.0) <= 3.0 * st.mean_se);
  CHECK(static_cast<std::size_t>((s.lifted_position % 9 + 9) % 9) == *s.config.tagged_site);
}

TEST_CASE("tagged particle moves with probability 1/k") {
  const int k = 4, trials = 100'000;
  int moved = 0;
  Configuration c;
  c.occ = {0, 0, k, 0, 0};
  c.tagged_site = 2;
  SimulationState base = make_state(linear().rate(), nn, c, 0);
  for (int t = 0; t < trials; ++t) {
    SimulationState s = base;
    s.rng = Rng(stream_seed(77, t));
    moved += kmc_step(s, nn).tagged;
  }
  const double p = 1.0 / k, se = std::sqrt(p * (1 - p) / trials);
  CHECK(std::abs(static_cast<double>(moved) / trials - p) <= 3.0 * se);
}

TEST_CASE("rate tree stays consistent") {
  SimulationState s = init_state(perturbed(), JumpKernel::uniform(2), DensityProfile::step(0.2, 3.0), 40, 5);
  const std::int64_t total = s.config.total;
  for (int i = 0; i < 50'000; ++i) kmc_step(s, JumpKernel::uniform(2));
  std::int64_t now = 0;
  for (auto v : s.config.occ) now += v;
  CHECK(now == total);
  CHECK(s.config.occ[*s.config.tagged_site] >= 1);
  CHECK(s.rate_tree.total() == doctest::Approx(tree_sum(s)).epsilon(1e-12));
}

TEST_CASE("environment view and tagged translation") {
  Configuration c;
  c.occ = {2, 0, 1, 3, 0, 1};
  c.tagged_site = 0;
  CHECK(environment_view(c) == c.occ);
  c.tagged_site = 3;
  const auto eta = environment_view(c);
  CHECK(eta == std::vector<std::int32_t>{3, 0, 1, 2, 0, 1});

  SimulationState s = init_state(perturbed(), nn, DensityProfile::constant(1.5), 12, 8);
  int checked = 0;
  for (int i = 0; i < 20'000 && checked < 50; ++i) {
    const auto before = environment_view(s.config);
    const EventRecord e = kmc_step(s, nn);
    const auto after = environment_view(s.config);
    std::int64_t sum_eta = 0, sum_xi = 0;
    for (std::size_t x = 0; x < after.size(); ++x) {
      sum_eta += after[x];
      sum_xi += s.config.occ[x];
    }
    CHECK(sum_eta == sum_xi);
    if (e.tagged) {
      CHECK(after == tagged_translation(before, e.z));
      ++checked;
    }
  }
  CHECK(checked == 50);
}

TEST_CASE("independent walkers: variance, mean and isometry") {
  const std::size_t N = 32, runs = 1000;
  const double T = 0.5;
  std::vector<double> x(runs), iso(runs);
  for (std::size_t i = 0; i < runs; ++i) {
    SimulationState s = init_state(linear(), nn, DensityProfile::constant(1.0), N, stream_seed(21, i));
    const TrajectoryRecord r = simulate(s, nn, T, uniform_record(T, 4));
    x[i] = r.x.back();
    iso[i] = r.x.back() * r.x.back() - r.qv.back();
    CHECK(r.x.front() == 0.0);
    CHECK(r.qv.back() <= linear().rate().a() * r.sigma2 * T * (1 + 1e-12));
  }
  const SampleStats sx = describe(x), si = describe(iso);
  CHECK(std::abs(sx.variance - T) <= 3.0 * sx.variance_se);
  CHECK(std::abs(sx.mean) <= 3.0 * sx.mean_se);
  CHECK(std::abs(si.mean) <= 3.0 * si.mean_se);
}

TEST_CASE("records: conservation, monotone qv, rate bound") {
  SimulationState s = init_state(perturbed(), nn, DensityProfile::cosine(1.0, 0.5), 64, 4);
  RecordSpec spec = uniform_record(0.05, 50);
  for (int i = 0; i <= 10; ++i) spec.snapshot_times.push_back(0.005 * i);
  const TrajectoryRecord r = simulate(s, nn, 0.05, spec);
  REQUIRE(r.snapshots.size() == 11);
  for (const auto& snap : r.snapshots) {
    std::int64_t tot = 0;
    for (auto v : snap.occ) tot += v;
    CHECK(tot == r.initial.total);
  }
  for (std::size_t i = 1; i < r.qv.size(); ++i) CHECK(r.qv[i] >= r.qv[i - 1]);
  CHECK(r.qv.back() <= perturbed().rate().max_rate_per_particle() * r.sigma2 * 0.05 * (1 + 1e-12));
  CHECK(r.x.front() == 0.0);
}

TEST_CASE("event budget") {
  SimulationState s = init_state(linear(), nn, DensityProfile::constant(1.0), 16, 1);
  RecordSpec spec = uniform_record(1.0, 1);
  spec.event_cap = 1;
  CHECK(error_code_of([&] { simulate(s, nn, 1.0, spec); }) == Errc::kEventBudgetExceeded);
}

TEST_CASE("identical seeds give identical records") {
  auto run = [] {
    SimulationState s = init_state(perturbed(), nn, DensityProfile::cosine(1.0, 0.5), 48, 99);
    RecordSpec spec = uniform_record(0.1, 20);
    spec.snapshot_times = {0.0, 0.1};
    return simulate(s, nn, 0.1, spec);
  };
  const TrajectoryRecord a = run(), b = run();
  CHECK(a.x == b.x);
  CHECK(a.qv == b.qv);
  CHECK(a.event_count == b.event_count);
  std::ostringstream ca, cb, sa, sb;
  write_trajectory_csv(a, ca);
  write_trajectory_csv(b, cb);
  write_snapshots(a, sa);
  write_snapshots(b, sb);
  CHECK(ca.str() == cb.str());
  CHECK(sa.str() == sb.str());
  CHECK(ca.str().rfind("t,x,qv\n", 0) == 0);
}

TEST_CASE("stationarity of the environment seen from the tagged particle") {
  // The tagged product measure is invariant on the torus as well, so the time
  // average of h(eta_t(0)) is an unbiased estimate of E_nu[h].
  const double rho = 1.0, T = 0.2;
  const SiteFunction h = [](std::int64_t k) { return static_cast<double>(std::min<std::int64_t>(k, 5)); };
  RecordSpec spec = uniform_record(T, 1);
  spec.origin_observables = {{"capped", h}};
  std::vector<double> avg;
  for (std::uint64_t i = 0; i < 200; ++i) {
    SimulationState s = init_state(perturbed(), nn, DensityProfile::constant(rho), 32, stream_seed(5, i));
    avg.push_back(simulate(s, nn, T, spec).origin_integrals[0].back() / T);
  }
  const SampleStats st = describe(avg);
  CHECK(std::abs(st.mean - perturbed().expectation(h, rho, Ensemble::kNu)) <= 3.0 * st.mean_se);
}

TEST_CASE("origin occupancy flux is balanced in a stationary run") {
  SimulationState s = init_state(perturbed(), nn, DensityProfile::constant(1.0), 24, 31);
  std::map<std::pair<int, int>, double> flux;
  int prev = s.config.occ[*s.config.tagged_site];
  for (int i = 0; i < 2'000'000; ++i) {
    kmc_step(s, nn);
    const int now = s.config.occ[*s.config.tagged_site];
    if (now != prev) flux[{prev, now}] += 1.0;
    prev = now;
  }
  int pairs = 0;
  for (const auto& [key, n_ab] : flux) {
    if (key.first > key.second) continue;
    const double n_ba = flux.count({key.second, key.first}) ? flux[{key.second, key.first}] : 0.0;
    if (n_ab + n_ba < 100) continue;
    CHECK(std::abs(n_ab - n_ba) <= 4.0 * std::sqrt(n_ab + n_ba));
    ++pairs;
  }
  CHECK(pairs >= 3);
}

TEST_CASE("density mode relaxes with diffusivity sigma^2 / 2") {
  // Independent walkers: pi_T(cos 2 pi u) -> (1/4) exp(-4 pi^2 (sigma^2 / 2) T).
  const std::size_t N = 256;
  const double T = 0.05;
  const TestFunction G = fourier_mode(1, false);
  std::vector<double> v;
  for (std::uint64_t i = 0; i < 20; ++i) {
    SimulationState s = init_state(linear(), nn, DensityProfile::cosine(1.0, 0.5), N, stream_seed(77, i));
    simulate(s, nn, T, uniform_record(T, 1));
    v.push_back(empirical_measure(s.config, G, false));
  }
  const SampleStats st = describe(v);
  const double expected = 0.25 * std::exp(-2.0 * std::numbers::pi * std::numbers::pi * T);
  CHECK(std::abs(st.mean - expected) <= 4.0 * st.mean_se);
}
