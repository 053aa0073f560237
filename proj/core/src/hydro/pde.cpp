#include "zrp/hydro/pde.hpp"

#include <algorithm>
#include <cmath>

#include "zrp/error.hpp"
#include "zrp/kernel/thermo_table.hpp"

namespace zrp {

GridField solve_pde(const Thermodynamics& thermo, const DensityProfile& profile, double sigma2, double T,
                    std::size_t M, double safety, std::vector<double> output_times) {
  if (M < 16) throw Error(Errc::kInvalidArgument, "PDE grid needs M >= 16");
  if (!(safety > 0.0 && safety <= 1.0)) throw Error(Errc::kInvalidArgument, "safety must lie in (0, 1]");
  if (!(T > 0.0) || !(sigma2 > 0.0)) throw Error(Errc::kInvalidArgument, "T and sigma2 must be positive");

  if (output_times.empty()) {
    for (int n = 0; n <= 100; ++n) output_times.push_back(n == 100 ? T : T * n / 100.0);
  }
  output_times.push_back(0.0);
  output_times.push_back(T);
  std::sort(output_times.begin(), output_times.end());
  output_times.erase(std::unique(output_times.begin(), output_times.end()), output_times.end());
  if (output_times.front() < 0.0 || output_times.back() > T)
    throw Error(Errc::kInvalidArgument, "output times must lie in [0, T]");

  GridField field;
  field.M = M;
  field.times = output_times;
  field.values.reserve(M * output_times.size());

  std::vector<double> rho(M), phi(M);
  double rho_max = 0.0;
  for (std::size_t i = 0; i < M; ++i) {
    rho[i] = profile(static_cast<double>(i) / static_cast<double>(M));
    rho_max = std::max(rho_max, rho[i]);
  }
  const ThermoTable table(thermo, std::max(2.0 * rho_max, 1e-3));
  const double lip = std::max(table.fugacity_lipschitz(), 1e-12);
  const double dx = 1.0 / static_cast<double>(M);
  const double dt_max = safety * dx * dx / (2.0 * sigma2 * lip);
  if (!(dt_max > 0.0) || !std::isfinite(dt_max)) throw Error(Errc::kCFLFailure, "stable time step underflows");

  field.values.insert(field.values.end(), rho.begin(), rho.end());
  for (std::size_t n = 1; n < output_times.size(); ++n) {
    const double span = output_times[n] - output_times[n - 1];
    const double steps = std::ceil(span / dt_max);
    if (!(steps < 1e12)) throw Error(Errc::kCFLFailure, "too many time steps for the stable step size");
    const auto count = static_cast<std::int64_t>(steps);
    const double dt = span / static_cast<double>(count);
    if (!(dt > 0.0)) throw Error(Errc::kCFLFailure, "time step underflows");
    const double lambda = sigma2 * dt / (dx * dx);
    for (std::int64_t s = 0; s < count; ++s) {
      for (std::size_t i = 0; i < M; ++i) phi[i] = table.fugacity(std::max(rho[i], 0.0));
      double left = phi[M - 1];
      for (std::size_t i = 0; i < M; ++i) {
        const double right = i + 1 == M ? phi[0] : phi[i + 1];
        rho[i] += lambda * (right - 2.0 * phi[i] + left);
        left = phi[i];
        if (rho[i] < -1e-12) throw Error(Errc::kNegativeDensity, "density went negative", static_cast<std::int64_t>(i));
      }
    }
    field.values.insert(field.values.end(), rho.begin(), rho.end());
  }
  return field;
}

}  // namespace zrp
