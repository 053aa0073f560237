#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "zrp/dynamics/simulation.hpp"

namespace zrp {

// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
double ks_distance(std::span<const double> a, std::span<const double> b);
// Asymptotic critical value c(alpha) sqrt((n + m) / (n m)).
double ks_critical_value(double alpha, std::size_t n, std::size_t m);

struct SampleStats {
  std::size_t n = 0;
  double mean = 0.0;
  // Unbiased.
  double variance = 0.0;
  double mean_se = 0.0;
  double variance_se = 0.0;
};

SampleStats describe(std::span<const double> sample);
// Type-7 quantile.
double quantile(std::vector<double> sample, double q);

struct EnsembleSummary {
  static constexpr std::array<double, 5> kLevels{0.05, 0.25, 0.5, 0.75, 0.95};
  std::size_t n_runs = 0;
  std::vector<double> times;
  std::vector<double> mean, variance, mean_se, variance_se;
  std::array<std::vector<double>, 5> quantiles;
};

// Per-record series on the record's sample grid.
using SeriesSelector = std::function<const std::vector<double>&(const TrajectoryRecord&)>;
SeriesSelector position_series();
SeriesSelector quadratic_variation_series();
SeriesSelector origin_integral_series(std::size_t index);

// Needs at least two records on one time grid; throws GridMismatch otherwise.
EnsembleSummary ensemble_summary(std::span<const TrajectoryRecord> records, const SeriesSelector& observable);
// Same on raw series sharing `times`.
EnsembleSummary ensemble_summary(const std::vector<double>& times, const std::vector<std::vector<double>>& series);

}  // namespace zrp
