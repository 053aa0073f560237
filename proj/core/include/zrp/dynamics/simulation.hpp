#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zrp/dynamics/configuration.hpp"
#include "zrp/dynamics/rate_tree.hpp"
#include "zrp/kernel/jump_kernel.hpp"
#include "zrp/kernel/thermodynamics.hpp"
#include "zrp/measures/profile.hpp"
#include "zrp/rng.hpp"

namespace zrp {

// Zero-range process on the torus in the fixed frame, with one tagged particle.
// Time is microscopic; the diffusive scaling t_micro = t N^2 is applied when
// recording. The rate function must outlive the state.
struct SimulationState {
  Configuration config;
  RateTree rate_tree;
  double micro_time = 0.0;
  // Unwrapped tagged position X_t; lifted_position mod N == tagged site.
  std::int64_t lifted_position = 0;
  // int_0^t g(xi_s(X_s)) / xi_s(X_s) ds in microscopic time.
  double qv_accumulator = 0.0;
  std::uint64_t event_count = 0;
  // N_t^z, indexed like JumpKernel::support().
  std::vector<std::int64_t> jump_counts;
  Rng rng{0};
  const RateFunction* rate = nullptr;
};

struct EventRecord {
  double tau = 0.0;
  std::size_t from = 0;
  std::size_t to = 0;
  int z = 0;
  bool tagged = false;
};

// Draws the initial configuration from the tagged local-equilibrium measure.
SimulationState init_state(const Thermodynamics& thermo, const JumpKernel& kernel, const DensityProfile& profile,
                           std::size_t N, std::uint64_t seed);

// Builds a state around a given tagged configuration.
SimulationState make_state(const RateFunction& rate, const JumpKernel& kernel, Configuration config,
                           std::uint64_t seed);

// One Gillespie event: Exp(R) holding time with R = sum_x g(xi(x)), site chosen
// with probability g(xi(x)) / R, displacement from p. A jump from the tagged
// site moves the tagged particle with probability 1 / xi(x).
EventRecord kmc_step(SimulationState& state, const JumpKernel& kernel);

// Observable h(eta_t(0)) whose time integral is accumulated exactly.
struct OriginObservable {
  std::string name;
  SiteFunction h;
};

struct RecordSpec {
  // Macroscopic times, ascending; must lie in [current time, T].
  std::vector<double> sample_times;
  std::vector<double> snapshot_times;
  std::uint64_t event_cap = 2'000'000'000ULL;
  bool keep_events = false;
  std::vector<OriginObservable> origin_observables;
};

RecordSpec uniform_record(double T, std::size_t intervals);

struct Snapshot {
  double t = 0.0;
  std::vector<std::int32_t> occ;
  std::size_t tagged_site = 0;
  std::int64_t lifted_position = 0;
};

struct LoggedEvent {
  double micro_time = 0.0;
  std::uint32_t from = 0;
  std::uint32_t to = 0;
  bool tagged = false;
};

struct TrajectoryRecord {
  std::size_t N = 0;
  std::uint64_t seed = 0;
  double sigma2 = 0.0;
  std::vector<double> times;
  // x_t^N = X_{t N^2} / N, unwrapped.
  std::vector<double> x;
  // <x^N>_t = sigma^2 int_0^{t N^2} g/eta (eta_s(0)) ds / N^2.
  std::vector<double> qv;
  // Per origin observable: int_0^t h(eta_s(0)) ds in macroscopic time.
  std::vector<std::vector<double>> origin_integrals;
  std::vector<Snapshot> snapshots;
  Configuration initial;
  double start_micro_time = 0.0;
  bool events_recorded = false;
  std::vector<LoggedEvent> events;
  std::uint64_t event_count = 0;
};

// Runs until micro_time = T N^2 and samples the record at the requested macro
// times. Between events the state is constant, so sampled positions and the
// piecewise-constant integrals are exact. Throws EventBudgetExceeded when the
// state's event count passes spec.event_cap.
TrajectoryRecord simulate(SimulationState& state, const JumpKernel& kernel, double T_macro, const RecordSpec& spec);

}  // namespace zrp
