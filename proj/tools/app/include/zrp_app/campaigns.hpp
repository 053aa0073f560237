#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "zrp/analysis/observables.hpp"
#include "zrp/dynamics/simulation.hpp"
#include "zrp/hydro/grid_field.hpp"
#include "zrp/kernel/jump_kernel.hpp"
#include "zrp/kernel/thermo_table.hpp"
#include "zrp/kernel/thermodynamics.hpp"
#include "zrp/measures/profile.hpp"
#include "zrp/parallel.hpp"
#include "zrp/rng.hpp"

namespace zrp::app {

enum class Comparison { kAtMost, kLessThan, kAtLeast, kGreaterThan };

struct CheckResult {
  std::string name;
  double statistic = 0.0;
  double threshold = 0.0;
  Comparison comparison = Comparison::kAtMost;
  bool pass = false;
  std::size_t n_runs = 0;
  std::vector<std::uint64_t> seeds;
  double runtime_s = 0.0;
  std::string detail;
};

CheckResult make_result(std::string name, double statistic, double threshold, Comparison cmp);
std::string comparison_symbol(Comparison cmp);

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

struct Model {
  std::shared_ptr<const Thermodynamics> thermo;
  JumpKernel kernel;
  DensityProfile profile;

  const RateFunction& rate() const { return thermo->rate(); }
  double sigma2() const { return kernel.sigma2(); }
  // Coefficient of d_xx phi(rho) in the hydrodynamic equation.
  double diffusivity() const { return 0.5 * kernel.sigma2(); }
};

Model make_model(const std::string& rate, const std::string& kernel, const std::string& profile);

struct EnsembleParams {
  std::size_t N = 128;
  double T = 0.1;
  std::size_t n_runs = 1;
  // Run i is seeded with stream_seed(seed_base, i).
  std::uint64_t seed_base = 1;
  std::size_t record_intervals = 100;
  // Macroscopic snapshot spacing, 0 for none; final_snapshot adds one at T.
  double snapshot_interval = 0.0;
  bool final_snapshot = false;
  std::uint64_t event_cap = 2'000'000'000ULL;
  bool keep_events = false;
  std::vector<OriginObservable> observables;
  unsigned workers = 0;
};

RecordSpec record_spec(const EnsembleParams& params);
TrajectoryRecord run_trajectory(const Model& model, const EnsembleParams& params, std::size_t index);

// fn(record, index) for every run; results are stored by run index, so the
// output does not depend on the worker count.
template <class R, class Fn>
std::vector<R> map_ensemble(const Model& model, const EnsembleParams& params, Fn&& fn) {
  std::vector<R> out(params.n_runs);
  const unsigned workers = params.workers ? params.workers : worker_count();
  parallel_for(params.n_runs, workers, [&](std::size_t i) { out[i] = fn(run_trajectory(model, params, i), i); });
  return out;
}

std::vector<std::uint64_t> run_seeds(std::uint64_t seed_base, std::size_t n);

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
  std::size_t n = 0;
};
MeanSe mean_se(const std::vector<double>& v);

// Each step must satisfy next < previous + sqrt(se_prev^2 + se_next^2).
// Returns the largest step increase in units of that slack.
double worst_trend_step(const std::vector<MeanSe>& rows);

// --- per-run statistics -----------------------------------------------------

// max_G |pi_t^{N,0}(G) - int G rho(t, u) du| on the fixed frame of `config`.
double fixed_frame_error(const Configuration& config, const GridField& field, double t,
                         const std::vector<TestFunction>& tests);
// max_G |pi_t^N(G) - int G(u) rho(t, u + x_t^N) du| in the environment view.
double shifted_frame_error(const Snapshot& snapshot, const GridField& field, const std::vector<TestFunction>& tests);
Configuration snapshot_configuration(const Snapshot& snapshot);

// |<x^N>_T - sigma^2 int_0^T psi(rho(s, x_s^N)) ds| along the recorded path.
double qv_identification_error(const TrajectoryRecord& rec, const ThermoTable& table, const GridField& field);

// --- checks -------------------------------------------------------------------

std::vector<CheckResult> check_thermo_oracle(const Thermodynamics& thermo);

// Variance within `z` variance SEs of sigma^2 T and mean within `z` SEs of 0.
std::vector<CheckResult> check_walk_invariance(const std::vector<double>& x_T, double sigma2, double T, double z = 3.0);

CheckResult check_hydrodynamic_limit(const Model& model, std::size_t N, double T, std::size_t M, std::uint64_t seed,
                                     double threshold = 0.05);

// Per-run errors at the large N and the small N.
std::vector<CheckResult> check_quadratic_variation(const std::vector<double>& errors_large,
                                                   const std::vector<double>& errors_small, double threshold = 0.05);

CheckResult check_tagged_distribution(const std::vector<double>& micro_x_T, const Model& model, const GridField& field,
                                      double dt, std::size_t n_paths, std::uint64_t seed, double threshold = 0.06);

CheckResult check_shifted_measure(const std::vector<double>& run_errors, double threshold = 0.06);

// gap(l, j) > 0 everywhere and min_l [l^2 min_j gap(l, j)] / min_j gap(l_0, j) >= ratio.
std::vector<CheckResult> check_spectral_gap(const RateFunction& rate, const JumpKernel& kernel,
                                            const std::vector<int>& ls, const std::vector<int>& js,
                                            double ratio = 0.1);

// max_{1 <= j <= 4l} equivalence gap at l_large below that at l_small.
CheckResult check_equivalence(const Thermodynamics& thermo, int l_small, int l_large, const SiteFunction& h,
                              const std::string& label);

// Gap statistics per N (ascending N), one check each for local and global.
std::vector<CheckResult> check_replacement_trend(const std::vector<MeanSe>& local, const std::vector<MeanSe>& global);

// Heat-equation max-norm error at M nodes and constant-psi SDE variance.
std::vector<CheckResult> check_solver_oracles(std::size_t M, std::size_t n_paths, std::uint64_t seed);

// Number of runs whose CSV bytes differ between two passes.
CheckResult check_determinism(const std::vector<std::string>& first, const std::vector<std::string>& second);

// --- replacement runs ---------------------------------------------------------

struct ReplacementParams {
  int l = 10;
  double eps = 1.0 / 16.0;
  double T = 0.1;
  std::size_t n_runs = 100;
  std::uint64_t seed_base = 1;
  unsigned workers = 0;
};

struct ReplacementRun {
  double local = 0.0;
  double global = 0.0;
  // Also reported by these runs at t = T when requested.
  double shifted_error = 0.0;
};

// Local gap for h(k) = g(k) / k and global gap for r = g(eta(0)) with block
// eps N; snapshots every eps^2 / 4 or finer. `field` enables the shifted-frame
// error at T.
std::vector<ReplacementRun> replacement_runs(const Model& model, std::size_t N, const ReplacementParams& params,
                                             const GridField* field = nullptr,
                                             const std::vector<TestFunction>* tests = nullptr);

struct SweepRow {
  double value = 0.0;
  MeanSe stat;
};

struct SweepTable {
  std::string axis;
  std::string statistic;
  std::vector<SweepRow> rows;
  // "decreasing", "not_decreasing" or "n/a" for a single row.
  std::string trend;
};
std::string trend_flag(const std::vector<SweepRow>& rows);
void write_sweep_csv(const SweepTable& table, std::ostream& out);

}  // namespace zrp::app
