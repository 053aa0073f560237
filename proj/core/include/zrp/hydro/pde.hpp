#pragma once

#include <vector>

#include "zrp/hydro/grid_field.hpp"
#include "zrp/kernel/thermodynamics.hpp"
#include "zrp/measures/profile.hpp"

namespace zrp {

// Explicit conservative scheme for d_t rho = sigma^2 d_xx phi(rho) on the unit
// torus with M nodes:
//   rho_i <- rho_i + (sigma^2 dt / dx^2) (phi_{i+1} - 2 phi_i + phi_{i-1}).
// The zero-range process with kernel variance v has diffusivity v / 2, so
// comparisons with simulations pass sigma2 = v / 2.
// dt satisfies sigma^2 dt / dx^2 * L_phi <= safety / 2, with L_phi the largest
// slope of phi on [0, 2 max rho_0], and is shrunk so every output time is hit
// exactly. output_times defaults to 101 uniform times; 0 and T are always
// included.
GridField solve_pde(const Thermodynamics& thermo, const DensityProfile& profile, double sigma2, double T,
                    std::size_t M, double safety = 0.9, std::vector<double> output_times = {});

}  // namespace zrp
