#include "zrp/hydro/sde.hpp"

#include <algorithm>
#include <cmath>

#include "zrp/dynamics/trajectory_io.hpp"
#include "zrp/error.hpp"
#include "zrp/parallel.hpp"
#include "zrp/rng.hpp"

namespace zrp {

namespace {

double table_range(const GridField& field) { return std::max(1.05 * field.max_value(), 1e-3); }

}  // namespace

std::vector<DiffusionPath> integrate_sde(const ThermoTable& table, const GridField& field, double sigma2, double dt,
                                         std::size_t n_paths, std::uint64_t seed, std::vector<double> record_times) {
  if (!(dt > 0.0) || dt > 1e-3) throw Error(Errc::kInvalidArgument, "SDE step must lie in (0, 1e-3]");
  if (field.times.empty() || field.times.front() != 0.0) throw Error(Errc::kInvalidArgument, "field must start at t = 0");
  const double T = field.final_time();
  const auto steps = static_cast<std::int64_t>(std::ceil(T / dt - 1e-9));
  auto step_time = [&](std::int64_t n) { return n >= steps ? T : static_cast<double>(n) * dt; };

  if (record_times.empty()) record_times = {0.0, T};
  std::sort(record_times.begin(), record_times.end());
  std::vector<std::int64_t> record_steps;
  for (double t : record_times) {
    const auto n = static_cast<std::int64_t>(std::llround(t / dt));
    const std::int64_t clamped = std::min(n, steps);
    if (std::abs(step_time(clamped) - t) > 1e-9 * std::max(dt, t))
      throw Error(Errc::kInvalidArgument, "record times must fall on the SDE step grid");
    record_steps.push_back(clamped);
  }

  const double sigma = std::sqrt(sigma2);
  std::vector<DiffusionPath> paths(n_paths);
  parallel_for(n_paths, worker_count(), [&](std::size_t p) {
    Rng rng(stream_seed(seed, p));
    FieldCursor rho(field);
    DiffusionPath path;
    path.times = record_times;
    path.x.reserve(record_times.size());
    path.a.reserve(record_times.size());
    double x = 0.0, a = 0.0;
    std::size_t r = 0;
    for (std::int64_t n = 0;; ++n) {
      while (r < record_steps.size() && record_steps[r] == n) {
        path.x.push_back(x);
        path.a.push_back(a);
        ++r;
      }
      if (n == steps) break;
      const double t = step_time(n);
      const double h = step_time(n + 1) - t;
      const double psi = table.psi(rho(t, x - std::floor(x)));
      x += sigma * std::sqrt(psi * h) * rng.normal();
      a += sigma2 * psi * h;
    }
    paths[p] = std::move(path);
  });
  return paths;
}

std::vector<DiffusionPath> integrate_sde(const Thermodynamics& thermo, const GridField& field, double sigma2,
                                         double dt, std::size_t n_paths, std::uint64_t seed,
                                         std::vector<double> record_times) {
  const ThermoTable table(thermo, table_range(field));
  return integrate_sde(table, field, sigma2, dt, n_paths, seed, std::move(record_times));
}

std::vector<double> limit_quadratic_variation(const ThermoTable& table, const GridField& field,
                                              const std::vector<double>& x_path, const std::vector<double>& times,
                                              double sigma2) {
  if (x_path.size() != times.size()) throw Error(Errc::kGridMismatch, "path and time grid differ in length");
  std::vector<double> a(times.size(), 0.0);
  if (times.empty()) return a;
  FieldCursor rho(field);
  auto integrand = [&](std::size_t i) { return sigma2 * table.psi(rho(times[i], x_path[i] - std::floor(x_path[i]))); };
  double prev = integrand(0);
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double cur = integrand(i);
    a[i] = a[i - 1] + 0.5 * (prev + cur) * (times[i] - times[i - 1]);
    prev = cur;
  }
  return a;
}

std::vector<double> limit_quadratic_variation(const Thermodynamics& thermo, const GridField& field,
                                              const std::vector<double>& x_path, const std::vector<double>& times,
                                              double sigma2) {
  const ThermoTable table(thermo, table_range(field));
  return limit_quadratic_variation(table, field, x_path, times, sigma2);
}

void write_sde_csv(const std::vector<DiffusionPath>& paths, std::ostream& out) {
  out << "path_id,t,x,a\n";
  for (std::size_t p = 0; p < paths.size(); ++p)
    for (std::size_t i = 0; i < paths[p].times.size(); ++i)
      out << p << ',' << format_number(paths[p].times[i]) << ',' << format_number(paths[p].x[i]) << ','
          << format_number(paths[p].a[i]) << '\n';
}

}  // namespace zrp
