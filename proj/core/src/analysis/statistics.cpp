#include "zrp/analysis/statistics.hpp"

#include <algorithm>
#include <cmath>

#include "zrp/error.hpp"

namespace zrp {

double ks_distance(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw Error(Errc::kEmptySample, "KS distance needs two nonempty samples");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double n = static_cast<double>(x.size()), m = static_cast<double>(y.size());
  std::size_t i = 0, k = 0;
  double d = 0.0;
  while (i < x.size() && k < y.size()) {
    const double v = std::min(x[i], y[k]);
    while (i < x.size() && x[i] == v) ++i;
    while (k < y.size() && y[k] == v) ++k;
    d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(k) / m));
  }
  return d;
}

double ks_critical_value(double alpha, std::size_t n, std::size_t m) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(Errc::kInvalidArgument, "alpha must lie in (0, 1)");
  if (n == 0 || m == 0) throw Error(Errc::kEmptySample, "sample sizes must be positive");
  const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
  const double nn = static_cast<double>(n), mm = static_cast<double>(m);
  return c * std::sqrt((nn + mm) / (nn * mm));
}

SampleStats describe(std::span<const double> sample) {
  if (sample.empty()) throw Error(Errc::kEmptySample, "empty sample");
  SampleStats s;
  s.n = sample.size();
  const double n = static_cast<double>(s.n);
  double sum = 0.0;
  for (double v : sample) sum += v;
  s.mean = sum / n;
  if (s.n < 2) return s;
  double m2 = 0.0, m4 = 0.0;
  for (double v : sample) {
    const double d = (v - s.mean) * (v - s.mean);
    m2 += d;
    m4 += d * d;
  }
  s.variance = m2 / (n - 1.0);
  m4 /= n;
  s.mean_se = std::sqrt(s.variance / n);
  const double var_of_var = (m4 - s.variance * s.variance * (n - 3.0) / (n - 1.0)) / n;
  s.variance_se = std::sqrt(std::max(var_of_var, 0.0));
  return s;
}

double quantile(std::vector<double> sample, double q) {
  if (sample.empty()) throw Error(Errc::kEmptySample, "empty sample");
  std::sort(sample.begin(), sample.end());
  const double h = (static_cast<double>(sample.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sample.size() - 1);
  return sample[lo] + (h - static_cast<double>(lo)) * (sample[hi] - sample[lo]);
}

SeriesSelector position_series() {
  return [](const TrajectoryRecord& r) -> const std::vector<double>& { return r.x; };
}

SeriesSelector quadratic_variation_series() {
  return [](const TrajectoryRecord& r) -> const std::vector<double>& { return r.qv; };
}

SeriesSelector origin_integral_series(std::size_t index) {
  return [index](const TrajectoryRecord& r) -> const std::vector<double>& {
    if (index >= r.origin_integrals.size()) throw Error(Errc::kInvalidArgument, "origin observable index out of range");
    return r.origin_integrals[index];
  };
}

EnsembleSummary ensemble_summary(const std::vector<double>& times, const std::vector<std::vector<double>>& series) {
  if (series.size() < 2) throw Error(Errc::kInvalidArgument, "ensemble summary needs at least two records");
  for (std::size_t r = 0; r < series.size(); ++r)
    if (series[r].size() != times.size())
      throw Error(Errc::kGridMismatch, "record length differs from the time grid", static_cast<std::int64_t>(r));
  EnsembleSummary out;
  out.n_runs = series.size();
  out.times = times;
  std::vector<double> column(series.size());
  for (std::size_t t = 0; t < times.size(); ++t) {
    for (std::size_t r = 0; r < series.size(); ++r) column[r] = series[r][t];
    const SampleStats s = describe(column);
    out.mean.push_back(s.mean);
    out.variance.push_back(s.variance);
    out.mean_se.push_back(s.mean_se);
    out.variance_se.push_back(s.variance_se);
    for (std::size_t q = 0; q < EnsembleSummary::kLevels.size(); ++q)
      out.quantiles[q].push_back(quantile(column, EnsembleSummary::kLevels[q]));
  }
  return out;
}

EnsembleSummary ensemble_summary(std::span<const TrajectoryRecord> records, const SeriesSelector& observable) {
  if (records.size() < 2) throw Error(Errc::kInvalidArgument, "ensemble summary needs at least two records");
  const auto& times = records.front().times;
  std::vector<std::vector<double>> series;
  series.reserve(records.size());
  for (std::size_t r = 0; r < records.size(); ++r) {
    if (records[r].times != times) throw Error(Errc::kGridMismatch, "records use different time grids", static_cast<std::int64_t>(r));
    series.push_back(observable(records[r]));
  }
  return ensemble_summary(times, series);
}

}  // namespace zrp
