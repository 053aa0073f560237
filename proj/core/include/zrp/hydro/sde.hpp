#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include "zrp/hydro/grid_field.hpp"
#include "zrp/kernel/thermo_table.hpp"

namespace zrp {

// One Euler-Maruyama path of dx = sigma sqrt(psi(rho(t, x))) dB, recorded at
// the requested times. x is unwrapped; rho is looked up at x mod 1.
struct DiffusionPath {
  std::vector<double> times;
  std::vector<double> x;
  // A_t = sigma^2 int_0^t psi(rho(s, x_s)) ds with the same left-point rule.
  std::vector<double> a;
};

// Paths over [0, field.final_time()] with step dt (the last step is shortened
// to land on T). record_times default to {0, T} and must fall on the step
// grid. Path i uses the rng stream stream_seed(seed, i).
std::vector<DiffusionPath> integrate_sde(const ThermoTable& table, const GridField& field, double sigma2, double dt,
                                         std::size_t n_paths, std::uint64_t seed,
                                         std::vector<double> record_times = {});
std::vector<DiffusionPath> integrate_sde(const Thermodynamics& thermo, const GridField& field, double sigma2,
                                         double dt, std::size_t n_paths, std::uint64_t seed,
                                         std::vector<double> record_times = {});

// Trapezoidal A_t = sigma^2 int_0^t psi(rho(s, x_s mod 1)) ds along any path
// sampled at `times` (microscopic trajectory or SDE path).
std::vector<double> limit_quadratic_variation(const ThermoTable& table, const GridField& field,
                                              const std::vector<double>& x_path, const std::vector<double>& times,
                                              double sigma2);
std::vector<double> limit_quadratic_variation(const Thermodynamics& thermo, const GridField& field,
                                              const std::vector<double>& x_path, const std::vector<double>& times,
                                              double sigma2);

// `path_id,t,x,a` rows.
void write_sde_csv(const std::vector<DiffusionPath>& paths, std::ostream& out);

}  // namespace zrp
