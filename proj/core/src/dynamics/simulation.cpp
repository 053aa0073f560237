#include "zrp/dynamics/simulation.hpp"

#include <algorithm>
#include <cassert>

#include "zrp/error.hpp"
#include "zrp/measures/samplers.hpp"

namespace zrp {

std::vector<std::int32_t> environment_view(const Configuration& config) {
  if (!config.tagged_site) throw Error(Errc::kInvalidArgument, "environment view needs a tagged particle");
  const std::size_t N = config.size();
  const std::size_t X = *config.tagged_site;
  std::vector<std::int32_t> eta(N);
  for (std::size_t x = 0; x < N; ++x) eta[x] = config.occ[(x + X) % N];
  return eta;
}

std::vector<std::int32_t> tagged_translation(const std::vector<std::int32_t>& eta, int z) {
  const auto N = static_cast<std::int64_t>(eta.size());
  auto wrap = [N](std::int64_t x) { return static_cast<std::size_t>(((x % N) + N) % N); };
  std::vector<std::int32_t> out(eta.size());
  for (std::int64_t x = 0; x < N; ++x) out[wrap(x)] = eta[wrap(x + z)];
  out[0] = eta[wrap(z)] + 1;
  out[wrap(-z)] = eta[0] - 1;
  return out;
}

namespace {

class RateLookup {
 public:
  explicit RateLookup(const RateFunction& rate) : rate_(rate), cache_(rate.cached_values()) {}
  double operator()(std::int32_t k) const {
    return static_cast<std::size_t>(k) < cache_.size() ? cache_[static_cast<std::size_t>(k)] : rate_(k);
  }

 private:
  const RateFunction& rate_;
  const std::vector<double>& cache_;
};

void check_state(const SimulationState& state) {
  if (!state.rate) throw Error(Errc::kInvalidArgument, "simulation state has no rate function");
  if (!state.config.tagged_site) throw Error(Errc::kInvalidArgument, "simulation state has no tagged particle");
}

struct Jump {
  std::size_t from;
  std::size_t to;
  std::size_t support_index;
  bool tagged;
};

// Chooses and applies the jump for the next event; the holding time has
// already been drawn.
Jump apply_jump(SimulationState& state, const JumpKernel& kernel, const RateLookup& g) {
  auto& occ = state.config.occ;
  const std::size_t N = occ.size();
  const double R = state.rate_tree.total();
  const std::size_t x = state.rate_tree.sample(state.rng.uniform() * R);
  const double u = state.rng.uniform();
  const auto& support = kernel.support();
  std::size_t zi = 0;
  {
    double acc = 0.0;
    for (; zi + 1 < support.size(); ++zi) {
      acc += support[zi].p;
      if (u < acc) break;
    }
  }
  const int z = support[zi].z;
  const auto Ni = static_cast<std::int64_t>(N);
  const std::size_t y = static_cast<std::size_t>(((static_cast<std::int64_t>(x) + z) % Ni + Ni) % Ni);

  bool tagged = false;
  if (x == *state.config.tagged_site) {
    const std::int32_t k = occ[x];
    tagged = k == 1 || state.rng.index(static_cast<std::uint64_t>(k)) == 0;
  }
  assert(occ[x] >= 1);
  --occ[x];
  ++occ[y];
  state.rate_tree.set(x, g(occ[x]));
  state.rate_tree.set(y, g(occ[y]));
  if (tagged) {
    state.config.tagged_site = y;
    state.lifted_position += z;
    ++state.jump_counts[zi];
  }
  ++state.event_count;
  return {x, y, zi, tagged};
}

}  // namespace

SimulationState make_state(const RateFunction& rate, const JumpKernel& kernel, Configuration config,
                           std::uint64_t seed) {
  const std::size_t N = config.size();
  if (N < static_cast<std::size_t>(2 * kernel.range() + 1))
    throw Error(Errc::kInvalidArgument, "torus smaller than 2 * kernel range + 1");
  if (!config.tagged_site || *config.tagged_site >= N || config.occ[*config.tagged_site] < 1)
    throw Error(Errc::kInvalidArgument, "configuration needs a tagged particle on an occupied site");
  SimulationState state;
  const RateLookup g(rate);
  std::vector<double> w(N);
  std::int64_t total = 0;
  for (std::size_t x = 0; x < N; ++x) {
    if (config.occ[x] < 0) throw Error(Errc::kInvalidArgument, "negative occupancy");
    w[x] = g(config.occ[x]);
    total += config.occ[x];
  }
  config.total = total;
  state.rate_tree = RateTree(w);
  state.lifted_position = static_cast<std::int64_t>(*config.tagged_site);
  state.config = std::move(config);
  state.jump_counts.assign(kernel.support().size(), 0);
  state.rng = Rng(seed);
  state.rate = &rate;
  return state;
}

SimulationState init_state(const Thermodynamics& thermo, const JumpKernel& kernel, const DensityProfile& profile,
                           std::size_t N, std::uint64_t seed) {
  if (N < static_cast<std::size_t>(2 * kernel.range() + 1))
    throw Error(Errc::kInvalidArgument, "torus smaller than 2 * kernel range + 1");
  Rng rng(seed);
  Configuration config = sample_local_equilibrium(thermo, profile, N, View::kTagged, rng);
  SimulationState state = make_state(thermo.rate(), kernel, std::move(config), seed);
  // Continue the same stream the configuration was drawn from.
  state.rng = rng;
  return state;
}

EventRecord kmc_step(SimulationState& state, const JumpKernel& kernel) {
  check_state(state);
  const RateLookup g(*state.rate);
  const double R = state.rate_tree.total();
  assert(R > 0.0);
  const double tau = state.rng.exponential(R);
  const std::int32_t k = state.config.occ[*state.config.tagged_site];
  state.qv_accumulator += tau * g(k) / k;
  state.micro_time += tau;
  const Jump jump = apply_jump(state, kernel, g);
  return {tau, jump.from, jump.to, kernel.support()[jump.support_index].z, jump.tagged};
}

RecordSpec uniform_record(double T, std::size_t intervals) {
  RecordSpec spec;
  spec.sample_times.resize(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i)
    spec.sample_times[i] = i == intervals ? T : T * static_cast<double>(i) / static_cast<double>(intervals);
  return spec;
}

TrajectoryRecord simulate(SimulationState& state, const JumpKernel& kernel, double T_macro, const RecordSpec& spec) {
  check_state(state);
  if (!(T_macro > 0.0)) throw Error(Errc::kInvalidArgument, "T_macro must be positive");
  const std::size_t N = state.config.size();
  const double scale = static_cast<double>(N) * static_cast<double>(N);
  const double t_end = T_macro * scale;
  const double start = state.micro_time / scale;
  auto check_times = [&](const std::vector<double>& ts) {
    if (!std::is_sorted(ts.begin(), ts.end())) throw Error(Errc::kInvalidArgument, "record times must be ascending");
    if (!ts.empty() && (ts.front() < start || ts.back() > T_macro))
      throw Error(Errc::kInvalidArgument, "record times must lie in [current time, T]");
  };
  check_times(spec.sample_times);
  check_times(spec.snapshot_times);

  const RateLookup g(*state.rate);
  const std::size_t n_obs = spec.origin_observables.size();
  std::vector<double> obs_acc(n_obs, 0.0);

  TrajectoryRecord rec;
  rec.N = N;
  rec.seed = state.rng.seed();
  rec.sigma2 = kernel.sigma2();
  rec.initial = state.config;
  rec.start_micro_time = state.micro_time;
  rec.events_recorded = spec.keep_events;
  rec.times = spec.sample_times;
  rec.x.reserve(rec.times.size());
  rec.qv.reserve(rec.times.size());
  rec.origin_integrals.assign(n_obs, {});
  for (auto& v : rec.origin_integrals) v.reserve(rec.times.size());

  const double sigma2 = kernel.sigma2();
  std::size_t next_sample = 0, next_snapshot = 0;
  auto& occ = state.config.occ;

  for (;;) {
    const double R = state.rate_tree.total();
    const double tau = state.rng.exponential(R);
    const double t_next = state.micro_time + tau;
    const std::int32_t k = occ[*state.config.tagged_site];
    const double qv_rate = g(k) / k;
    double h_rate_buf[8];
    std::vector<double> h_rate_heap;
    double* h_rate = h_rate_buf;
    if (n_obs > 8) {
      h_rate_heap.resize(n_obs);
      h_rate = h_rate_heap.data();
    }
    for (std::size_t i = 0; i < n_obs; ++i) h_rate[i] = spec.origin_observables[i].h(k);

    const double horizon = std::min(t_next, t_end);
    while (next_sample < rec.times.size() && rec.times[next_sample] * scale <= horizon) {
      const double dt = rec.times[next_sample] * scale - state.micro_time;
      rec.x.push_back(static_cast<double>(state.lifted_position) / static_cast<double>(N));
      rec.qv.push_back(sigma2 * (state.qv_accumulator + dt * qv_rate) / scale);
      for (std::size_t i = 0; i < n_obs; ++i) rec.origin_integrals[i].push_back((obs_acc[i] + dt * h_rate[i]) / scale);
      ++next_sample;
    }
    while (next_snapshot < spec.snapshot_times.size() && spec.snapshot_times[next_snapshot] * scale <= horizon) {
      rec.snapshots.push_back(
          {spec.snapshot_times[next_snapshot], occ, *state.config.tagged_site, state.lifted_position});
      ++next_snapshot;
    }

    if (t_next >= t_end) {
      // Memoryless holding time: the unused remainder is discarded.
      const double dt = t_end - state.micro_time;
      state.qv_accumulator += dt * qv_rate;
      state.micro_time = t_end;
      break;
    }
    state.qv_accumulator += tau * qv_rate;
    for (std::size_t i = 0; i < n_obs; ++i) obs_acc[i] += tau * h_rate[i];
    state.micro_time = t_next;
    if (state.event_count >= spec.event_cap)
      throw Error(Errc::kEventBudgetExceeded, "event budget exceeded", static_cast<std::int64_t>(spec.event_cap));
    const Jump jump = apply_jump(state, kernel, g);
    if (spec.keep_events)
      rec.events.push_back(
          {t_next, static_cast<std::uint32_t>(jump.from), static_cast<std::uint32_t>(jump.to), jump.tagged});
  }
  rec.event_count = state.event_count;
  return rec;
}

}  // namespace zrp
