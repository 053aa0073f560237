#include "zrp_app/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <limits>
#include <map>
#include <sstream>

#include "zrp/analysis/replacement.hpp"
#include "zrp/analysis/spectral_gap.hpp"
#include "zrp/analysis/statistics.hpp"
#include "zrp/dynamics/trajectory_io.hpp"
#include "zrp/error.hpp"
#include "zrp/hydro/pde.hpp"
#include "zrp/hydro/sde.hpp"
#include "zrp/measures/canonical.hpp"

#ifndef ZRP_VERSION
#define ZRP_VERSION "unknown"
#endif

namespace zrp::app {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

double threshold(const ExperimentConfig& c, const std::string& name, double fallback) {
  auto it = c.verify.thresholds.find(name);
  return it == c.verify.thresholds.end() ? fallback : it->second;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::kIo, "cannot write '" + path.string() + "'");
  return f;
}

EnsembleParams ensemble_params(const ExperimentConfig& c, std::size_t N) {
  EnsembleParams p;
  p.N = N;
  p.T = c.run.T;
  p.n_runs = c.run.n_runs;
  p.seed_base = c.run.seed_base;
  p.record_intervals = c.run.record_intervals;
  p.snapshot_interval = c.run.snapshot_interval;
  p.event_cap = c.run.event_cap;
  return p;
}

std::vector<double> final_positions(const Model& model, const EnsembleParams& p) {
  return map_ensemble<double>(model, p, [](const TrajectoryRecord& r, std::size_t) { return r.x.back(); });
}

std::vector<std::string> trajectory_csvs(const Model& model, const EnsembleParams& p) {
  return map_ensemble<std::string>(model, p, [](const TrajectoryRecord& r, std::size_t) {
    std::ostringstream s;
    write_trajectory_csv(r, s);
    return s.str();
  });
}

Model config_model(const ExperimentConfig& c) { return make_model(c.model.rate, c.model.kernel, c.model.profile); }

std::vector<std::size_t> sorted_N(const ExperimentConfig& c) {
  auto Ns = c.grid.N;
  std::sort(Ns.begin(), Ns.end());
  return Ns;
}

using CheckFn = std::function<std::vector<CheckResult>(const ExperimentConfig&)>;

const std::vector<std::pair<std::string, CheckFn>>& check_table() {
  static const std::vector<std::pair<std::string, CheckFn>> table{
      {"thermo_oracle",
       [](const ExperimentConfig& c) { return check_thermo_oracle(*config_model(c).thermo); }},
      {"walk_invariance",
       [](const ExperimentConfig& c) {
         Stopwatch clock;
         const Model m = config_model(c);
         const EnsembleParams p = ensemble_params(c, c.grid.N.front());
         auto out = check_walk_invariance(final_positions(m, p), m.sigma2(), c.run.T, threshold(c, "walk", 3.0));
         for (auto& r : out) {
           r.seeds = {c.run.seed_base};
           r.runtime_s = clock.seconds();
         }
         return out;
       }},
      {"hydrodynamic_limit",
       [](const ExperimentConfig& c) {
         const Model m = config_model(c);
         return std::vector{check_hydrodynamic_limit(m, c.grid.N.front(), c.run.T, c.grid.M, c.run.seed_base,
                                                     threshold(c, "hydrodynamic_limit", 0.05))};
       }},
      {"quadratic_variation",
       [](const ExperimentConfig& c) {
         Stopwatch clock;
         const auto Ns = sorted_N(c);
         if (Ns.size() < 2) throw Error(Errc::kInvalidArgument, "quadratic_variation needs two N values");
         const Model m = config_model(c);
         const GridField field = solve_pde(*m.thermo, m.profile, m.diffusivity(), c.run.T, c.grid.M);
         const ThermoTable table(*m.thermo, std::max(1.05 * field.max_value(), 1e-3));
         auto errors = [&](std::size_t N) {
           return map_ensemble<double>(m, ensemble_params(c, N), [&](const TrajectoryRecord& r, std::size_t) {
             return qv_identification_error(r, table, field);
           });
         };
         auto out = check_quadratic_variation(errors(Ns.back()), errors(Ns.front()),
                                              threshold(c, "quadratic_variation", 0.05));
         for (auto& r : out) {
           r.seeds = {c.run.seed_base};
           r.runtime_s = clock.seconds();
         }
         return out;
       }},
      {"tagged_distribution",
       [](const ExperimentConfig& c) {
         Stopwatch clock;
         const Model m = config_model(c);
         const GridField field = solve_pde(*m.thermo, m.profile, m.diffusivity(), c.run.T, c.grid.M);
         const auto micro = final_positions(m, ensemble_params(c, c.grid.N.front()));
         CheckResult r = check_tagged_distribution(micro, m, field, c.grid.dt_sde, c.run.n_paths,
                                                   c.run.seed_base + 1, threshold(c, "tagged_distribution", 0.06));
         r.seeds = {c.run.seed_base, c.run.seed_base + 1};
         r.runtime_s = clock.seconds();
         return std::vector{r};
       }},
      {"shifted_measure",
       [](const ExperimentConfig& c) {
         Stopwatch clock;
         const Model m = config_model(c);
         const GridField field = solve_pde(*m.thermo, m.profile, m.diffusivity(), c.run.T, c.grid.M);
         const auto tests = fourier_test_functions(4);
         EnsembleParams p = ensemble_params(c, c.grid.N.front());
         p.snapshot_interval = 0.0;
         p.final_snapshot = true;
         const auto errs = map_ensemble<double>(m, p, [&](const TrajectoryRecord& r, std::size_t) {
           return shifted_frame_error(r.snapshots.back(), field, tests);
         });
         CheckResult r = check_shifted_measure(errs, threshold(c, "shifted_measure", 0.06));
         r.seeds = {c.run.seed_base};
         r.runtime_s = clock.seconds();
         return std::vector{r};
       }},
      {"spectral_gap",
       [](const ExperimentConfig& c) {
         const Model m = config_model(c);
         return check_spectral_gap(m.rate(), m.kernel, c.verify.l, c.verify.j, threshold(c, "spectral_gap", 0.1));
       }},
      {"equivalence",
       [](const ExperimentConfig& c) {
         auto ls = c.verify.l;
         std::sort(ls.begin(), ls.end());
         if (ls.size() < 2) throw Error(Errc::kInvalidArgument, "equivalence needs two l values");
         const Model m = config_model(c);
         const SiteFunction h = [](std::int64_t k) { return static_cast<double>(std::min<std::int64_t>(k, 5)); };
         return std::vector{check_equivalence(*m.thermo, ls.front(), ls.back(), h, m.rate().name())};
       }},
      {"replacement",
       [](const ExperimentConfig& c) {
         Stopwatch clock;
         const Model m = config_model(c);
         ReplacementParams rp;
         rp.l = c.verify.block;
         rp.eps = c.verify.epsilon.front();
         rp.T = c.run.T;
         rp.n_runs = c.run.n_runs;
         rp.seed_base = c.run.seed_base;
         std::vector<MeanSe> local, global;
         for (std::size_t N : sorted_N(c)) {
           const auto runs = replacement_runs(m, N, rp);
           std::vector<double> a, b;
           for (const auto& r : runs) {
             a.push_back(r.local);
             b.push_back(r.global);
           }
           local.push_back(mean_se(a));
           global.push_back(mean_se(b));
         }
         auto out = check_replacement_trend(local, global);
         for (auto& r : out) {
           r.seeds = {c.run.seed_base};
           r.runtime_s = clock.seconds();
         }
         return out;
       }},
      {"solver_oracles",
       [](const ExperimentConfig& c) { return check_solver_oracles(c.grid.M, c.run.n_paths, c.run.seed_base); }},
      {"determinism",
       [](const ExperimentConfig& c) {
         Stopwatch clock;
         const Model m = config_model(c);
         EnsembleParams p = ensemble_params(c, c.grid.N.front());
         const auto first = trajectory_csvs(m, p);
         // The second pass uses a different worker count on purpose.
         p.workers = worker_count() == 1 ? 2 : 1;
         CheckResult r = check_determinism(first, trajectory_csvs(m, p));
         r.seeds = {c.run.seed_base};
         r.runtime_s = clock.seconds();
         return std::vector{r};
       }},
  };
  return table;
}

ordered_json check_json(const CheckResult& r) {
  auto number = [](double v) -> ordered_json {
    if (std::isfinite(v)) return v;
    return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  };
  ordered_json seeds = ordered_json::array();
  for (auto s : r.seeds) seeds.push_back(s);
  return ordered_json{{"name", r.name},
                      {"statistic", number(r.statistic)},
                      {"threshold", number(r.threshold)},
                      {"comparison", comparison_symbol(r.comparison)},
                      {"pass", r.pass},
                      {"n_runs", r.n_runs},
                      {"seeds", seeds},
                      {"runtime_s", r.runtime_s},
                      {"detail", r.detail}};
}

struct Manifest {
  std::string subcommand;
  std::vector<std::string> artifacts;
};

void write_manifest(const fs::path& dir, const ExperimentConfig& c, const Manifest& m) {
  char hash[19];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(c.hash()));
  ordered_json seeds = ordered_json::array();
  const std::size_t listed = std::min<std::size_t>(c.run.n_runs, 10'000);
  for (auto s : run_seeds(c.run.seed_base, listed)) seeds.push_back(s);
  ordered_json j{{"subcommand", m.subcommand},
                 {"config_hash_fnv1a64", hash},
                 {"seed_base", c.run.seed_base},
                 {"seed_scheme", "run i: splitmix64(seed_base ^ splitmix64(i + 0x632be59bd9b4e019))"},
                 {"run_seeds", seeds},
                 {"versions", {{"zrp", ZRP_VERSION}, {"compiler", __VERSION__}}},
                 {"artifacts", m.artifacts}};
  auto f = open_out(dir / "manifest.json");
  f << j.dump(2) << '\n';
}

void cmd_thermo(const ExperimentConfig& c, const fs::path& dir, Manifest& man, std::ostream& out) {
  const Model m = config_model(c);
  const double hi = std::max(2.0 * m.profile.bound(), 1.0);
  auto f = open_out(dir / "thermo.csv");
  f << "rho,phi,psi,variance\n";
  constexpr int kPoints = 200;
  for (int i = 0; i <= kPoints; ++i) {
    const double rho = hi * i / kPoints;
    const double phi = m.thermo->fugacity(rho);
    f << format_number(rho) << ',' << format_number(phi) << ',' << format_number(m.thermo->psi(rho)) << ','
      << format_number(m.thermo->variance(phi)) << '\n';
  }
  man.artifacts.push_back("thermo.csv");
  out << "thermo: rate " << m.rate().name() << ", a = " << format_number(m.rate().a()) << '\n';
}

void cmd_hydro(const ExperimentConfig& c, const fs::path& dir, Manifest& man, std::ostream& out) {
  const Model m = config_model(c);
  const GridField field = solve_pde(*m.thermo, m.profile, m.diffusivity(), c.run.T, c.grid.M);
  auto f = open_out(dir / "field.csv");
  write_field_csv(field, f);
  man.artifacts.push_back("field.csv");
  out << "hydro: M = " << c.grid.M << ", mass drift "
      << format_number(field.mass(field.times.size() - 1) - field.mass(0)) << '\n';
}

void write_summary(const EnsembleSummary& s, const EnsembleSummary& qv, std::ostream& f) {
  f << "t,mean_x,var_x,mean_x_se,var_x_se,q05_x,q25_x,q50_x,q75_x,q95_x,mean_qv,mean_qv_se\n";
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    f << format_number(s.times[i]) << ',' << format_number(s.mean[i]) << ',' << format_number(s.variance[i]) << ','
      << format_number(s.mean_se[i]) << ',' << format_number(s.variance_se[i]);
    for (const auto& q : s.quantiles) f << ',' << format_number(q[i]);
    f << ',' << format_number(qv.mean[i]) << ',' << format_number(qv.mean_se[i]) << '\n';
  }
}

void cmd_simulate(const ExperimentConfig& c, const fs::path& dir, Manifest& man, std::ostream& out) {
  const Model m = config_model(c);
  fs::create_directories(dir / "trajectories");
  for (std::size_t N : c.grid.N) {
    const EnsembleParams p = ensemble_params(c, N);
    std::vector<TrajectoryRecord> records(p.n_runs);
    const unsigned workers = worker_count();
    parallel_for(p.n_runs, workers, [&](std::size_t i) { records[i] = run_trajectory(m, p, i); });
    for (std::size_t i = 0; i < records.size(); ++i) {
      const std::string stem = "trajectories/N" + std::to_string(N) + "_run" + std::to_string(i);
      write_trajectory_csv(records[i], (dir / (stem + ".csv")).string());
      man.artifacts.push_back(stem + ".csv");
      if (!records[i].snapshots.empty()) {
        write_snapshots(records[i], (dir / (stem + "_snapshots.txt")).string());
        man.artifacts.push_back(stem + "_snapshots.txt");
      }
    }
    if (records.size() >= 2) {
      const std::string name = "summary_N" + std::to_string(N) + ".csv";
      auto f = open_out(dir / name);
      write_summary(ensemble_summary(records, position_series()), ensemble_summary(records, quadratic_variation_series()),
                    f);
      man.artifacts.push_back(name);
    }
    std::uint64_t events = 0;
    for (const auto& r : records) events += r.event_count;
    out << "simulate: N = " << N << ", " << records.size() << " runs, " << events << " events\n";
  }
}

std::vector<double> sde_record_times(const ExperimentConfig& c) {
  const double steps = c.run.T / c.grid.dt_sde;
  const double per = steps / static_cast<double>(c.run.record_intervals);
  if (std::abs(per - std::round(per)) > 1e-9 * per || std::round(per) < 1.0) return {0.0, c.run.T};
  std::vector<double> ts;
  const auto n = static_cast<std::size_t>(std::llround(steps));
  const auto stride = static_cast<std::size_t>(std::llround(per));
  for (std::size_t k = 0; k <= n; k += stride) ts.push_back(k == n ? c.run.T : static_cast<double>(k) * c.grid.dt_sde);
  if (ts.back() != c.run.T) ts.push_back(c.run.T);
  return ts;
}

void cmd_sde(const ExperimentConfig& c, const fs::path& dir, Manifest& man, std::ostream& out) {
  const Model m = config_model(c);
  const GridField field = solve_pde(*m.thermo, m.profile, m.diffusivity(), c.run.T, c.grid.M);
  const auto paths =
      integrate_sde(*m.thermo, field, m.sigma2(), c.grid.dt_sde, c.run.n_paths, c.run.seed_base, sde_record_times(c));
  {
    auto f = open_out(dir / "sde.csv");
    write_sde_csv(paths, f);
    man.artifacts.push_back("sde.csv");
  }
  if (paths.size() >= 2) {
    std::vector<std::vector<double>> xs, as;
    for (const auto& p : paths) {
      xs.push_back(p.x);
      as.push_back(p.a);
    }
    auto f = open_out(dir / "sde_summary.csv");
    write_summary(ensemble_summary(paths.front().times, xs), ensemble_summary(paths.front().times, as), f);
    man.artifacts.push_back("sde_summary.csv");
  }
  out << "sde: " << paths.size() << " paths, dt = " << format_number(c.grid.dt_sde) << '\n';
}

void cmd_gap(const ExperimentConfig& c, const fs::path& dir, Manifest& man, std::ostream& out) {
  const Model m = config_model(c);
  auto f = open_out(dir / "gap.csv");
  f << "l,j,states,gap,gap_l2,residual\n";
  for (int l : c.verify.l)
    for (int j : c.verify.j) {
      const SpectralGapResult g = spectral_gap(m.rate(), m.kernel, l, j);
      f << l << ',' << j << ',' << g.states << ',' << format_number(g.gap) << ',' << format_number(g.gap * l * l)
        << ',' << format_number(g.reversibility_residual) << '\n';
    }
  man.artifacts.push_back("gap.csv");
  out << "gap: " << c.verify.l.size() * c.verify.j.size() << " boxes\n";
}

int cmd_verify(const ExperimentConfig& c, const fs::path& dir, Manifest& man, std::ostream& out) {
  const auto results = run_verify_checks(c, out);
  auto f = open_out(dir / "report.json");
  write_report_json(results, f);
  man.artifacts.push_back("report.json");
  const bool ok = std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.pass; });
  return ok ? kExitOk : kExitVerification;
}

void cmd_sweep(const ExperimentConfig& c, const std::string& axis, const fs::path& dir, Manifest& man,
               std::ostream& out) {
  const SweepTable t = run_sweep(c, axis);
  const std::string name = "sweep_" + axis + ".csv";
  auto f = open_out(dir / name);
  write_sweep_csv(t, f);
  man.artifacts.push_back(name);
  out << "sweep " << axis << " (" << t.statistic << "): trend " << t.trend << '\n';
}

}  // namespace

std::vector<std::string> known_checks() {
  std::vector<std::string> out;
  for (const auto& [name, fn] : check_table()) out.push_back(name);
  return out;
}

std::vector<CheckResult> run_verify_checks(const ExperimentConfig& config, std::ostream& log) {
  std::vector<std::string> wanted = config.verify.checks;
  if (wanted.empty()) wanted = known_checks();
  std::vector<CheckResult> results;
  for (const auto& name : wanted) {
    const auto& table = check_table();
    auto it = std::find_if(table.begin(), table.end(), [&](const auto& e) { return e.first == name; });
    if (it == table.end()) throw Error(Errc::kUnknownBuiltin, "unknown check '" + name + "'");
    for (auto& r : it->second(config)) {
      log << (r.pass ? "PASS " : "FAIL ") << r.name << ": " << format_number(r.statistic) << ' '
          << comparison_symbol(r.comparison) << ' ' << format_number(r.threshold) << '\n';
      results.push_back(std::move(r));
    }
  }
  return results;
}

SweepTable run_sweep(const ExperimentConfig& c, const std::string& axis) {
  const Model m = config_model(c);
  SweepTable t;
  t.axis = axis;
  t.statistic = c.verify.statistic;
  const bool replacement = t.statistic == "local_replacement" || t.statistic == "global_replacement";
  auto replacement_row = [&](std::size_t N, int l, double eps) {
    ReplacementParams rp;
    rp.l = l;
    rp.eps = eps;
    rp.T = c.run.T;
    rp.n_runs = c.run.n_runs;
    rp.seed_base = c.run.seed_base;
    std::vector<double> v;
    for (const auto& r : replacement_runs(m, N, rp)) v.push_back(t.statistic == "local_replacement" ? r.local : r.global);
    return mean_se(v);
  };
  if (axis == "N") {
    if (!replacement) throw Error(Errc::kUnknownBuiltin, "axis N supports local_replacement or global_replacement");
    for (std::size_t N : c.grid.N)
      t.rows.push_back({static_cast<double>(N), replacement_row(N, c.verify.block, c.verify.epsilon.front())});
  } else if (axis == "epsilon") {
    if (!replacement) throw Error(Errc::kUnknownBuiltin, "axis epsilon supports local_replacement or global_replacement");
    for (double eps : c.verify.epsilon) t.rows.push_back({eps, replacement_row(c.grid.N.front(), c.verify.block, eps)});
  } else if (axis == "l") {
    for (int l : c.verify.l) {
      SweepRow row{static_cast<double>(l), {}};
      if (replacement) {
        row.stat = replacement_row(c.grid.N.front(), l, c.verify.epsilon.front());
      } else if (t.statistic == "equivalence") {
        const SiteFunction h = [](std::int64_t k) { return static_cast<double>(std::min<std::int64_t>(k, 5)); };
        double w = 0.0;
        for (int j = 1; j <= 4 * l; ++j) w = std::max(w, equivalence_gap(*m.thermo, l, j, h));
        row.stat = {w, 0.0, 1};
      } else if (t.statistic == "spectral_gap") {
        double w = std::numeric_limits<double>::infinity();
        for (int j : c.verify.j) w = std::min(w, spectral_gap(m.rate(), m.kernel, l, j).gap);
        row.stat = {w, 0.0, 1};
      } else {
        throw Error(Errc::kUnknownBuiltin, "unknown sweep statistic '" + t.statistic + "'");
      }
      t.rows.push_back(row);
    }
  } else {
    throw Error(Errc::kUnknownBuiltin, "unknown sweep axis '" + axis + "'");
  }
  t.trend = trend_flag(t.rows);
  return t;
}

void write_report_json(const std::vector<CheckResult>& results, std::ostream& out) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : results) arr.push_back(check_json(r));
  out << arr.dump(2) << '\n';
}

int run_command(const CommandOptions& options, std::ostream& out, std::ostream& err) {
  ExperimentConfig config;
  try {
    config = load_config(options.config_path);
  } catch (const Error& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  try {
    const fs::path dir = options.out_dir.value_or(config.output);
    fs::create_directories(dir);
    Manifest man{options.subcommand, {}};
    int code = kExitOk;
    const std::string& s = options.subcommand;
    if (s == "thermo") cmd_thermo(config, dir, man, out);
    else if (s == "hydro") cmd_hydro(config, dir, man, out);
    else if (s == "simulate") cmd_simulate(config, dir, man, out);
    else if (s == "sde") cmd_sde(config, dir, man, out);
    else if (s == "gap") cmd_gap(config, dir, man, out);
    else if (s == "verify") code = cmd_verify(config, dir, man, out);
    else if (s == "sweep") {
      if (!options.axis) {
        err << "config error: sweep needs --axis N|l|epsilon\n";
        return kExitConfig;
      }
      cmd_sweep(config, *options.axis, dir, man, out);
    } else {
      err << "config error: unknown subcommand '" << s << "'\n";
      return kExitConfig;
    }
    write_manifest(dir, config, man);
    return code;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == Errc::kConfigParse || e.code() == Errc::kUnknownBuiltin ? kExitConfig : kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace zrp::app
