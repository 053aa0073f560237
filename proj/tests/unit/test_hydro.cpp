#include <doctest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "zrp/analysis/statistics.hpp"
#include "zrp/hydro/pde.hpp"
#include "zrp/hydro/sde.hpp"

using namespace zrp;
using zrp::test::error_code_of;

namespace {

const Thermodynamics& linear() {
  static const Thermodynamics th(validate_rate(linear_rate()));
  return th;
}
const Thermodynamics& perturbed() {
  static const Thermodynamics th(validate_rate(linear_perturbed_rate()));
  return th;
}

double heat_mode(double t, double u) {
  constexpr double pi = std::numbers::pi;
  return 1.0 + 0.5 * std::exp(-4.0 * pi * pi * t) * std::cos(2.0 * pi * u);
}

}  // namespace

TEST_CASE("constant profiles are stationary") {
  const GridField f = solve_pde(perturbed(), DensityProfile::constant(1.3), 1.0, 0.05, 64);
  for (double v : f.values) CHECK(v == doctest::Approx(1.3).epsilon(1e-13));
}

TEST_CASE("heat equation mode decay") {
  const GridField f = solve_pde(linear(), DensityProfile::cosine(1.0, 0.5), 1.0, 0.1, 512);
  double err = 0.0;
  for (std::size_t n = 0; n < f.times.size(); ++n)
    for (std::size_t i = 0; i < f.M; ++i) err = std::max(err, std::abs(f.at(n, i) - heat_mode(f.times[n], i / 512.0)));
  CHECK(err <= 1e-3);
  CHECK(f.final_time() == 0.1);
  // Off-grid bilinear lookups.
  for (double t : {0.0123, 0.05, 0.0999})
    for (double u : {0.001, 0.3337, 0.77})
      CHECK(std::abs(interpolate_density(f, t, u) - heat_mode(t, u)) <= 2e-3);
  CHECK(interpolate_density(f, f.times[7], 5.0 / 512.0) == f.at(7, 5));
  CHECK(interpolate_density(f, 0.0, 1.0 + 5.0 / 512.0) == doctest::Approx(f.at(0, 5)).epsilon(1e-14));
  CHECK(error_code_of([&] { interpolate_density(f, 0.2, 0.1); }) == Errc::kOutOfRange);
}

TEST_CASE("mass conservation and nonnegativity") {
  const GridField f = solve_pde(perturbed(), DensityProfile::step(0.0, 2.0), 2.5, 0.02, 128);
  for (std::size_t n = 0; n < f.times.size(); ++n) {
    CHECK(std::abs(f.mass(n) - f.mass(0)) <= 1e-12);
    for (double v : f.row(n)) CHECK(v >= 0.0);
  }
}

TEST_CASE("ordered initial profiles stay ordered") {
  const GridField lo = solve_pde(perturbed(), DensityProfile::cosine(1.0, 0.5), 1.0, 0.05, 128);
  const GridField hi = solve_pde(perturbed(), DensityProfile::cosine(1.2, 0.5), 1.0, 0.05, 128,  0.9, lo.times);
  REQUIRE(lo.values.size() == hi.values.size());
  for (std::size_t k = 0; k < lo.values.size(); ++k) CHECK(lo.values[k] <= hi.values[k] + 1e-14);
}

TEST_CASE("grid refinement") {
  auto solve = [](std::size_t M) {
    return solve_pde(perturbed(), DensityProfile::cosine(1.0, 0.8), 1.0, 0.02, M, 0.9, {0.02});
  };
  auto diff = [](const GridField& coarse, const GridField& fine) {
    double d = 0.0;
    const std::size_t last = coarse.times.size() - 1;
    for (std::size_t i = 0; i < coarse.M; ++i) d = std::max(d, std::abs(coarse.at(last, i) - fine.at(last, 2 * i)));
    return d;
  };
  const GridField a = solve(32), b = solve(64), c = solve(128);
  CHECK(diff(a, b) >= 3.0 * diff(b, c));
}

TEST_CASE("solver preconditions") {
  CHECK(error_code_of([] { solve_pde(linear(), DensityProfile::constant(1.0), 1.0, 0.1, 8); }) ==
        Errc::kInvalidArgument);
  CHECK(error_code_of([] { solve_pde(linear(), DensityProfile::constant(1.0), 1.0, 0.1, 64, 1.5); }) ==
        Errc::kInvalidArgument);
}

TEST_CASE("Brownian limit with constant psi") {
  const GridField flat = solve_pde(linear(), DensityProfile::constant(1.0), 1.0, 0.2, 32);
  const auto paths = integrate_sde(linear(), flat, 1.0, 1e-3, 100'000, 17);
  std::vector<double> x;
  for (const auto& p : paths) {
    x.push_back(p.x.back());
    CHECK(p.x.front() == 0.0);
  }
  const SampleStats s = describe(x);
  CHECK(std::abs(s.variance / 0.2 - 1.0) <= 0.01);
  CHECK(error_code_of([&] { integrate_sde(linear(), flat, 1.0, 2e-3, 10, 1); }) == Errc::kInvalidArgument);
}

TEST_CASE("quadratic variation with constant density") {
  const double c = 1.7, sigma2 = 2.0, T = 0.1;
  const GridField flat = solve_pde(perturbed(), DensityProfile::constant(c), sigma2, T, 32);
  const auto paths = integrate_sde(perturbed(), flat, sigma2, 1e-3, 50, 3);
  for (const auto& p : paths) CHECK(p.a.back() == doctest::Approx(sigma2 * perturbed().psi(c) * T).epsilon(1e-9));
  const std::vector<double> times{0.0, 0.03, 0.07, 0.1};
  const auto a = limit_quadratic_variation(perturbed(), flat, {0.0, 0.4, -0.2, 3.1}, times, sigma2);
  CHECK(a.back() == doctest::Approx(sigma2 * perturbed().psi(c) * T).epsilon(1e-9));
}

TEST_CASE("martingale isometry and bounded quadratic variation") {
  const double T = 0.1, sigma2 = 1.0;
  const GridField f = solve_pde(perturbed(), DensityProfile::cosine(1.0, 0.5), sigma2, T, 128);
  std::vector<double> times;
  for (int i = 0; i <= 100; ++i) times.push_back(i == 100 ? T : i * 1e-3);
  const auto paths = integrate_sde(perturbed(), f, sigma2, 1e-3, 20'000, 9, times);
  std::vector<double> d;
  const double a = perturbed().rate().a();
  for (const auto& p : paths) {
    d.push_back(p.x.back() * p.x.back() - p.a.back());
    CHECK(p.a.back() <= a * sigma2 * T * (1.0 + 1e-12));
    for (std::size_t i = 1; i < p.a.size(); ++i) CHECK(p.a[i] >= p.a[i - 1]);
  }
  const SampleStats s = describe(d);
  CHECK(std::abs(s.mean) <= 3.0 * s.mean_se);

  // Trapezoid on the path grid and on every second point agree closely.
  const auto& p = paths.front();
  std::vector<double> xs, ts;
  for (std::size_t i = 0; i < p.times.size(); i += 2) {
    xs.push_back(p.x[i]);
    ts.push_back(p.times[i]);
  }
  const double fine = limit_quadratic_variation(perturbed(), f, p.x, p.times, sigma2).back();
  const double coarse = limit_quadratic_variation(perturbed(), f, xs, ts, sigma2).back();
  CHECK(std::abs(fine - coarse) < 1e-3);
  const auto lq = limit_quadratic_variation(perturbed(), f, p.x, p.times, sigma2);
  for (std::size_t i = 1; i < lq.size(); ++i) CHECK(lq[i] >= lq[i - 1]);
}

TEST_CASE("SDE paths are reproducible") {
  const GridField f = solve_pde(perturbed(), DensityProfile::cosine(1.0, 0.5), 1.0, 0.05, 64);
  const auto a = integrate_sde(perturbed(), f, 1.0, 1e-3, 64, 5);
  const auto b = integrate_sde(perturbed(), f, 1.0, 1e-3, 64, 5);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].x == b[i].x);
    CHECK(a[i].a == b[i].a);
  }
}
