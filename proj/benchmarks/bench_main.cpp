#include <benchmark/benchmark.h>

#include <vector>

#include "zrp/dynamics/rate_tree.hpp"
#include "zrp/dynamics/simulation.hpp"
#include "zrp/hydro/pde.hpp"
#include "zrp/kernel/thermodynamics.hpp"
#include "zrp/rng.hpp"

namespace {

const zrp::Thermodynamics& nonlinear() {
  static const zrp::Thermodynamics th(zrp::validate_rate(zrp::linear_perturbed_rate()));
  return th;
}

void BM_KmcStep(benchmark::State& state) {
  const auto N = static_cast<std::size_t>(state.range(0));
  const auto nn = zrp::JumpKernel::nearest_neighbor();
  zrp::SimulationState s = zrp::init_state(nonlinear(), nn, zrp::DensityProfile::cosine(1.0, 0.5), N, 1);
  for (auto _ : state) benchmark::DoNotOptimize(zrp::kmc_step(s, nn));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_KmcStep)->Arg(64)->Arg(512)->Arg(4096);

void BM_RateTreeUpdateSample(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> w(n, 1.0);
  zrp::RateTree tree(w);
  zrp::Rng rng(2);
  for (auto _ : state) {
    const std::size_t i = tree.sample(rng.uniform() * tree.total());
    tree.set(i, 0.5 + rng.uniform());
    benchmark::DoNotOptimize(tree.total());
  }
}
BENCHMARK(BM_RateTreeUpdateSample)->Arg(512)->Arg(1 << 16);

void BM_Fugacity(benchmark::State& state) {
  double rho = 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(nonlinear().fugacity(rho));
    rho = rho > 20.0 ? 0.01 : rho * 1.1;
  }
}
BENCHMARK(BM_Fugacity);

void BM_SolvePde(benchmark::State& state) {
  const auto M = static_cast<std::size_t>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(zrp::solve_pde(nonlinear(), zrp::DensityProfile::cosine(1.0, 0.5), 0.5, 0.01, M));
}
BENCHMARK(BM_SolvePde)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
