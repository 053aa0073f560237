#include "zrp/analysis/observables.hpp"

#include <cmath>
#include <numbers>

#include "zrp/error.hpp"

namespace zrp {

TestFunction fourier_mode(int k, bool sine) {
  const double w = 2.0 * std::numbers::pi * k;
  TestFunction f;
  f.name = std::string(sine ? "sin" : "cos") + ":" + std::to_string(k);
  if (sine)
    f.G = [w](double u) { return std::sin(w * u); };
  else
    f.G = [w](double u) { return std::cos(w * u); };
  f.bound = 1.0;
  f.d1_bound = w;
  f.d2_bound = w * w;
  return f;
}

std::vector<TestFunction> fourier_test_functions(int k_max) {
  std::vector<TestFunction> out;
  for (int k = 1; k <= k_max; ++k) {
    out.push_back(fourier_mode(k, false));
    out.push_back(fourier_mode(k, true));
  }
  return out;
}

double discrete_gradient(const TestFunction& G, std::size_t N, int z, double u) {
  const double n = static_cast<double>(N);
  return n * (G(u + z / n) - G(u));
}

double discrete_laplacian(const TestFunction& G, const JumpKernel& kernel, std::size_t N, double u) {
  const double n = static_cast<double>(N);
  double acc = 0.0;
  for (const auto& [z, p] : kernel.support()) acc += p * (G(u + z / n) - G(u));
  return n * n * acc;
}

double empirical_measure(const Configuration& config, const TestFunction& G, bool shifted) {
  const std::size_t N = config.size();
  const std::size_t offset = shifted ? config.tagged_site.value() : 0;
  double acc = 0.0;
  for (std::size_t x = 0; x < N; ++x) {
    const std::int32_t k = config.occ[(x + offset) % N];
    if (k != 0) acc += G(static_cast<double>(x) / static_cast<double>(N)) * k;
  }
  return acc / static_cast<double>(N);
}

double block_average(std::span<const std::int32_t> occ, std::int64_t x, int l) {
  const auto N = static_cast<std::int64_t>(occ.size());
  if (l < 0 || 2 * static_cast<std::int64_t>(l) + 1 > N) throw Error(Errc::kInvalidArgument, "block wider than the torus");
  std::int64_t acc = 0;
  for (std::int64_t y = x - l; y <= x + l; ++y) acc += occ[static_cast<std::size_t>(((y % N) + N) % N)];
  return static_cast<double>(acc) / (2.0 * l + 1.0);
}

double integrate_field(const GridField& field, double t, const TestFunction& G, double shift) {
  const double slack = 1e-12 * std::max(1.0, field.final_time());
  if (t < field.times.front() - slack || t > field.final_time() + slack)
    throw Error(Errc::kOutOfRange, "time outside the solved interval");
  std::size_t n = 0;
  while (n + 1 < field.times.size() && field.times[n + 1] <= t) ++n;
  const std::size_t m = std::min(n + 1, field.times.size() - 1);
  const double w = m == n ? 0.0 : std::clamp((t - field.times[n]) / (field.times[m] - field.times[n]), 0.0, 1.0);
  // Substituting v = u + shift keeps the quadrature on the grid nodes.
  double acc = 0.0;
  for (std::size_t i = 0; i < field.M; ++i) {
    const double v = static_cast<double>(i) / static_cast<double>(field.M);
    const double rho = (1.0 - w) * field.at(n, i) + w * field.at(m, i);
    acc += G(v - shift) * rho;
  }
  return acc / static_cast<double>(field.M);
}

}  // namespace zrp
