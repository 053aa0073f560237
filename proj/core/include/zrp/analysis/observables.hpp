#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "zrp/dynamics/configuration.hpp"
#include "zrp/dynamics/simulation.hpp"
#include "zrp/hydro/grid_field.hpp"
#include "zrp/kernel/jump_kernel.hpp"

namespace zrp {

// Smooth periodic test function G on the unit torus with declared bounds on
// |G|, |G'| and |G''|.
struct TestFunction {
  std::string name;
  std::function<double(double)> G;
  double bound = 1.0;
  double d1_bound = 0.0;
  double d2_bound = 0.0;

  double operator()(double u) const { return G(u); }
};

// cos(2 pi k u) or sin(2 pi k u).
TestFunction fourier_mode(int k, bool sine);
// cos and sin modes for k = 1..k_max, 2 k_max functions.
std::vector<TestFunction> fourier_test_functions(int k_max);

// N [G(u + z/N) - G(u)].
double discrete_gradient(const TestFunction& G, std::size_t N, int z, double u);
// N^2 sum_z p(z) [G(u + z/N) - G(u)].
double discrete_laplacian(const TestFunction& G, const JumpKernel& kernel, std::size_t N, double u);

// (1/N) sum_x G(x/N) occ(x), with occ the environment view eta when shifted
// and the fixed-frame xi otherwise.
double empirical_measure(const Configuration& config, const TestFunction& G, bool shifted);

// Periodic window mean over |y - x| <= l.
double block_average(std::span<const std::int32_t> occ, std::int64_t x, int l);

// int G(u) rho(t, u + shift) du by the node rule on the field grid, linear in t.
double integrate_field(const GridField& field, double t, const TestFunction& G, double shift = 0.0);

// M_t^{N,G} sampled at the record times, from an exact replay of the event log
// in the tagged frame:
//   pi_t(G) - pi_0(G) - int_0^t [ (1/N) sum_x Delta_N G(x/N) g(eta_s(x))
//       + (g/eta)(0) pi_s(Delta_N G) - (2/N) (g/eta)(0) Delta_N G(0) ] ds.
// Requires keep_events and the nearest-neighbour kernel.
std::vector<double> field_martingale(const TrajectoryRecord& traj, const TestFunction& G, const JumpKernel& kernel,
                                     const RateFunction& rate);

}  // namespace zrp
