#include "zrp_app/campaigns.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "zrp/analysis/replacement.hpp"
#include "zrp/analysis/spectral_gap.hpp"
#include "zrp/analysis/statistics.hpp"
#include "zrp/dynamics/trajectory_io.hpp"
#include "zrp/error.hpp"
#include "zrp/hydro/pde.hpp"
#include "zrp/hydro/sde.hpp"
#include "zrp/measures/canonical.hpp"

namespace zrp::app {

CheckResult make_result(std::string name, double statistic, double threshold, Comparison cmp) {
  CheckResult r;
  r.name = std::move(name);
  r.statistic = statistic;
  r.threshold = threshold;
  r.comparison = cmp;
  switch (cmp) {
    case Comparison::kAtMost: r.pass = statistic <= threshold; break;
    case Comparison::kLessThan: r.pass = statistic < threshold; break;
    case Comparison::kAtLeast: r.pass = statistic >= threshold; break;
    case Comparison::kGreaterThan: r.pass = statistic > threshold; break;
  }
  // NaN never passes.
  if (std::isnan(statistic)) r.pass = false;
  return r;
}

std::string comparison_symbol(Comparison cmp) {
  switch (cmp) {
    case Comparison::kAtMost: return "<=";
    case Comparison::kLessThan: return "<";
    case Comparison::kAtLeast: return ">=";
    case Comparison::kGreaterThan: return ">";
  }
  return "?";
}

Model make_model(const std::string& rate, const std::string& kernel, const std::string& profile) {
  return Model{std::make_shared<const Thermodynamics>(validate_rate(parse_rate(rate))), parse_kernel(kernel),
               parse_profile(profile)};
}

RecordSpec record_spec(const EnsembleParams& params) {
  RecordSpec spec = uniform_record(params.T, params.record_intervals);
  if (params.snapshot_interval > 0.0) {
    const auto n = static_cast<std::size_t>(std::ceil(params.T / params.snapshot_interval - 1e-9));
    for (std::size_t i = 0; i <= n; ++i)
      spec.snapshot_times.push_back(i == n ? params.T : params.T * static_cast<double>(i) / static_cast<double>(n));
  } else if (params.final_snapshot) {
    spec.snapshot_times.push_back(params.T);
  }
  spec.event_cap = params.event_cap;
  spec.keep_events = params.keep_events;
  spec.origin_observables = params.observables;
  return spec;
}

TrajectoryRecord run_trajectory(const Model& model, const EnsembleParams& params, std::size_t index) {
  SimulationState state =
      init_state(*model.thermo, model.kernel, model.profile, params.N, stream_seed(params.seed_base, index));
  return simulate(state, model.kernel, params.T, record_spec(params));
}

std::vector<std::uint64_t> run_seeds(std::uint64_t seed_base, std::size_t n) {
  std::vector<std::uint64_t> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = stream_seed(seed_base, i);
  return out;
}

MeanSe mean_se(const std::vector<double>& v) {
  const SampleStats s = describe(v);
  return {s.mean, s.mean_se, s.n};
}

double worst_trend_step(const std::vector<MeanSe>& rows) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double slack = std::hypot(rows[i - 1].se, rows[i].se);
    const double step = rows[i].mean - rows[i - 1].mean;
    // Deterministic rows (no SE) must decrease strictly.
    const double scaled = slack > 0.0 ? step / slack : (step < 0.0 ? -1.0 : std::numeric_limits<double>::infinity());
    worst = std::max(worst, scaled);
  }
  return worst;
}

double fixed_frame_error(const Configuration& config, const GridField& field, double t,
                         const std::vector<TestFunction>& tests) {
  double worst = 0.0;
  for (const auto& G : tests)
    worst = std::max(worst, std::abs(empirical_measure(config, G, false) - integrate_field(field, t, G)));
  return worst;
}

Configuration snapshot_configuration(const Snapshot& snapshot) {
  Configuration c;
  c.occ = snapshot.occ;
  c.tagged_site = snapshot.tagged_site;
  for (auto k : c.occ) c.total += k;
  return c;
}

double shifted_frame_error(const Snapshot& snapshot, const GridField& field, const std::vector<TestFunction>& tests) {
  const Configuration c = snapshot_configuration(snapshot);
  const double x = static_cast<double>(snapshot.lifted_position) / static_cast<double>(c.size());
  double worst = 0.0;
  for (const auto& G : tests)
    worst = std::max(worst, std::abs(empirical_measure(c, G, true) - integrate_field(field, snapshot.t, G, x)));
  return worst;
}

double qv_identification_error(const TrajectoryRecord& rec, const ThermoTable& table, const GridField& field) {
  const auto limit = limit_quadratic_variation(table, field, rec.x, rec.times, rec.sigma2);
  return std::abs(rec.qv.back() - limit.back());
}

std::vector<CheckResult> check_thermo_oracle(const Thermodynamics& thermo) {
  Stopwatch clock;
  double round_trip = 0.0, mean_rate = 0.0;
  const auto& rate = thermo.rate();
  const SiteFunction g = [&rate](std::int64_t k) { return rate(k); };
  constexpr int kPoints = 50;
  for (int i = 0; i < kPoints; ++i) {
    const double phi = std::pow(10.0, -6.0 + 8.0 * i / (kPoints - 1));
    const double rho = thermo.density(phi);
    round_trip = std::max(round_trip, std::abs(thermo.fugacity(rho) - phi) / (1.0 + phi));
    mean_rate = std::max(mean_rate, std::abs(thermo.expectation(g, rho, Ensemble::kMu) - thermo.fugacity(rho)));
  }
  std::vector<CheckResult> out{make_result("thermo_round_trip", round_trip, 1e-10, Comparison::kAtMost),
                               make_result("thermo_mean_rate", mean_rate, 1e-8, Comparison::kAtMost)};
  for (auto& r : out) r.runtime_s = clock.seconds();
  return out;
}

std::vector<CheckResult> check_walk_invariance(const std::vector<double>& x_T, double sigma2, double T, double z) {
  const SampleStats s = describe(x_T);
  CheckResult var = make_result("walk_variance", std::abs(s.variance - sigma2 * T) / s.variance_se, z, Comparison::kAtMost);
  CheckResult mean = make_result("walk_mean", std::abs(s.mean) / s.mean_se, z, Comparison::kAtMost);
  std::ostringstream d;
  d << "variance " << format_number(s.variance) << " +- " << format_number(s.variance_se) << " vs "
    << format_number(sigma2 * T) << ", mean " << format_number(s.mean) << " +- " << format_number(s.mean_se);
  var.detail = mean.detail = d.str();
  var.n_runs = mean.n_runs = s.n;
  return {var, mean};
}

CheckResult check_hydrodynamic_limit(const Model& model, std::size_t N, double T, std::size_t M, std::uint64_t seed,
                                     double threshold) {
  Stopwatch clock;
  const GridField field = solve_pde(*model.thermo, model.profile, model.diffusivity(), T, M);
  EnsembleParams p;
  p.N = N;
  p.T = T;
  p.n_runs = 1;
  p.seed_base = seed;
  p.record_intervals = 1;
  p.final_snapshot = true;
  const TrajectoryRecord rec = run_trajectory(model, p, 0);
  const double err =
      fixed_frame_error(snapshot_configuration(rec.snapshots.back()), field, T, fourier_test_functions(4));
  CheckResult r = make_result("hydrodynamic_limit", err, threshold, Comparison::kAtMost);
  r.n_runs = 1;
  r.seeds = run_seeds(seed, 1);
  r.runtime_s = clock.seconds();
  return r;
}

std::vector<CheckResult> check_quadratic_variation(const std::vector<double>& errors_large,
                                                   const std::vector<double>& errors_small, double threshold) {
  const MeanSe large = mean_se(errors_large), small = mean_se(errors_small);
  CheckResult level = make_result("qv_identification", large.mean, threshold, Comparison::kAtMost);
  CheckResult trend = make_result("qv_trend", large.mean / small.mean, 1.0, Comparison::kLessThan);
  std::ostringstream d;
  d << "mean error " << format_number(large.mean) << " +- " << format_number(large.se) << " (large N), "
    << format_number(small.mean) << " +- " << format_number(small.se) << " (small N)";
  level.detail = trend.detail = d.str();
  level.n_runs = large.n;
  trend.n_runs = large.n + small.n;
  return {level, trend};
}

CheckResult check_tagged_distribution(const std::vector<double>& micro_x_T, const Model& model, const GridField& field,
                                      double dt, std::size_t n_paths, std::uint64_t seed, double threshold) {
  Stopwatch clock;
  const auto paths = integrate_sde(*model.thermo, field, model.sigma2(), dt, n_paths, seed);
  std::vector<double> limit(paths.size());
  for (std::size_t i = 0; i < paths.size(); ++i) limit[i] = paths[i].x.back();
  const double d = ks_distance(micro_x_T, limit);
  CheckResult r = make_result("tagged_distribution", d, threshold, Comparison::kAtMost);
  std::ostringstream s;
  s << "KS " << format_number(d) << ", 1% critical value "
    << format_number(ks_critical_value(0.01, micro_x_T.size(), limit.size())) << ", " << n_paths << " limit paths";
  r.detail = s.str();
  r.n_runs = micro_x_T.size();
  r.runtime_s = clock.seconds();
  return r;
}

CheckResult check_shifted_measure(const std::vector<double>& run_errors, double threshold) {
  const MeanSe m = mean_se(run_errors);
  CheckResult r = make_result("shifted_measure", m.mean, threshold, Comparison::kAtMost);
  r.detail = "mean over runs of the max over test functions, SE " + format_number(m.se);
  r.n_runs = m.n;
  return r;
}

std::vector<CheckResult> check_spectral_gap(const RateFunction& rate, const JumpKernel& kernel,
                                            const std::vector<int>& ls, const std::vector<int>& js, double ratio) {
  Stopwatch clock;
  if (ls.empty() || js.empty()) throw Error(Errc::kInvalidArgument, "spectral gap check needs l and j values");
  double min_gap = std::numeric_limits<double>::infinity();
  std::vector<double> scaled;
  std::ostringstream d;
  for (int l : ls) {
    double min_j = std::numeric_limits<double>::infinity();
    for (int j : js) min_j = std::min(min_j, spectral_gap(rate, kernel, l, j).gap);
    min_gap = std::min(min_gap, min_j);
    scaled.push_back(min_j * l * l);
    d << "l=" << l << ": min_j gap " << format_number(min_j) << "; ";
  }
  const double trend = *std::min_element(scaled.begin(), scaled.end()) / scaled.front();
  std::vector<CheckResult> out{make_result("spectral_gap_positive", min_gap, 0.0, Comparison::kGreaterThan),
                               make_result("spectral_gap_scaling", trend, ratio, Comparison::kAtLeast)};
  for (auto& r : out) {
    r.detail = d.str();
    r.runtime_s = clock.seconds();
  }
  return out;
}

CheckResult check_equivalence(const Thermodynamics& thermo, int l_small, int l_large, const SiteFunction& h,
                              const std::string& label) {
  Stopwatch clock;
  auto worst = [&](int l) {
    double w = 0.0;
    for (int j = 1; j <= 4 * l; ++j) w = std::max(w, equivalence_gap(thermo, l, j, h));
    return w;
  };
  const double small = worst(l_small), large = worst(l_large);
  CheckResult r = make_result("equivalence_" + label, large / small, 1.0, Comparison::kLessThan);
  r.detail = "max_j gap " + format_number(small) + " at l=" + std::to_string(l_small) + ", " + format_number(large) +
             " at l=" + std::to_string(l_large);
  r.runtime_s = clock.seconds();
  return r;
}

std::vector<CheckResult> check_replacement_trend(const std::vector<MeanSe>& local, const std::vector<MeanSe>& global) {
  auto one = [](const char* name, const std::vector<MeanSe>& rows) {
    CheckResult r = make_result(name, worst_trend_step(rows), 1.0, Comparison::kLessThan);
    std::ostringstream d;
    for (const auto& row : rows) d << format_number(row.mean) << " +- " << format_number(row.se) << "; ";
    r.detail = d.str();
    for (const auto& row : rows) r.n_runs += row.n;
    return r;
  };
  return {one("local_replacement_trend", local), one("global_replacement_trend", global)};
}

std::vector<CheckResult> check_solver_oracles(std::size_t M, std::size_t n_paths, std::uint64_t seed) {
  Stopwatch clock;
  const Thermodynamics linear(validate_rate(linear_rate()));
  const double sigma2 = 1.0, T = 0.1;
  const GridField heat = solve_pde(linear, DensityProfile::cosine(1.0, 0.5), sigma2, T, M);
  double err = 0.0;
  for (std::size_t n = 0; n < heat.times.size(); ++n) {
    const double decay = std::exp(-4.0 * std::numbers::pi * std::numbers::pi * sigma2 * heat.times[n]);
    for (std::size_t i = 0; i < M; ++i) {
      const double u = static_cast<double>(i) / static_cast<double>(M);
      err = std::max(err, std::abs(heat.at(n, i) - (1.0 + 0.5 * decay * std::cos(2.0 * std::numbers::pi * u))));
    }
  }
  CheckResult pde = make_result("pde_heat_oracle", err, 1e-3, Comparison::kAtMost);
  pde.runtime_s = clock.seconds();

  Stopwatch sde_clock;
  const double T_sde = 0.2;
  const GridField flat = solve_pde(linear, DensityProfile::constant(1.0), sigma2, T_sde, 64);
  const auto paths = integrate_sde(linear, flat, sigma2, 1e-3, n_paths, seed);
  std::vector<double> x(paths.size());
  for (std::size_t i = 0; i < paths.size(); ++i) x[i] = paths[i].x.back();
  const SampleStats s = describe(x);
  CheckResult sde = make_result("sde_constant_psi_variance", std::abs(s.variance / (sigma2 * T_sde) - 1.0), 0.01,
                                Comparison::kAtMost);
  sde.detail = "variance " + format_number(s.variance) + " vs " + format_number(sigma2 * T_sde);
  sde.n_runs = n_paths;
  sde.seeds = {seed};
  sde.runtime_s = sde_clock.seconds();
  return {pde, sde};
}

CheckResult check_determinism(const std::vector<std::string>& first, const std::vector<std::string>& second) {
  double mismatches = first.size() == second.size() ? 0.0 : 1.0;
  for (std::size_t i = 0; i < std::min(first.size(), second.size()); ++i)
    if (first[i] != second[i]) mismatches += 1.0;
  CheckResult r = make_result("determinism", mismatches, 0.0, Comparison::kAtMost);
  r.n_runs = first.size();
  r.detail = "runs whose trajectory CSV differs between the two passes";
  return r;
}

std::vector<ReplacementRun> replacement_runs(const Model& model, std::size_t N, const ReplacementParams& params,
                                             const GridField* field, const std::vector<TestFunction>* tests) {
  const auto& rate = model.rate();
  const SiteFunction h = [&rate](std::int64_t k) { return k == 0 ? 0.0 : rate(k) / static_cast<double>(k); };
  const SiteFunction r = [&rate](std::int64_t k) { return rate(k); };
  const int L = static_cast<int>(std::max<long long>(1, std::llround(params.eps * static_cast<double>(N))));

  EnsembleParams p;
  p.N = N;
  p.T = params.T;
  p.n_runs = params.n_runs;
  p.seed_base = params.seed_base;
  p.record_intervals = 10;
  p.snapshot_interval = params.eps * params.eps / 4.0;
  p.observables = {{"g_over_k", h}};
  p.workers = params.workers;
  return map_ensemble<ReplacementRun>(model, p, [&](const TrajectoryRecord& rec, std::size_t) {
    ReplacementRun run;
    const BlockSmoothedExpectation hbar(*model.thermo, h, params.l);
    const SiteMean rbar(*model.thermo, r);
    run.local = local_replacement_gap(rec, hbar, params.eps, 0);
    run.global = global_replacement_gap(rec, rbar, L);
    if (field && tests) run.shifted_error = shifted_frame_error(rec.snapshots.back(), *field, *tests);
    return run;
  });
}

std::string trend_flag(const std::vector<SweepRow>& rows) {
  if (rows.size() < 2) return "n/a";
  std::vector<MeanSe> stats;
  for (const auto& r : rows) stats.push_back(r.stat);
  return worst_trend_step(stats) < 1.0 ? "decreasing" : "not_decreasing";
}

void write_sweep_csv(const SweepTable& table, std::ostream& out) {
  out << table.axis << ",statistic,se,n_runs,trend\n";
  for (const auto& row : table.rows)
    out << format_number(row.value) << ',' << format_number(row.stat.mean) << ',' << format_number(row.stat.se) << ','
        << row.stat.n << ',' << table.trend << '\n';
}

}  // namespace zrp::app
