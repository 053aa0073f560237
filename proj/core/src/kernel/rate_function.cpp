#include "zrp/kernel/rate_function.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "zrp/error.hpp"

namespace zrp {

RateSpec linear_rate() {
  return {"linear", [](std::int64_t k) { return static_cast<double>(k); }};
}

RateSpec linear_perturbed_rate() {
  return {"linear_perturbed", [](std::int64_t k) {
            const double x = static_cast<double>(k);
            return x + (1.0 - std::exp(-x));
          }};
}

RateSpec table_rate(std::string name, std::vector<double> table, double tail_slope,
                    double tail_intercept) {
  if (table.empty()) throw Error(Errc::kInvalidArgument, "rate table is empty");
  if (!(tail_slope > 0.0)) throw Error(Errc::kInvalidArgument, "rate table tail slope must be positive");
  return {std::move(name), [table = std::move(table), tail_slope, tail_intercept](std::int64_t k) {
            if (k < static_cast<std::int64_t>(table.size())) return table[static_cast<std::size_t>(k)];
            return tail_slope * static_cast<double>(k) + tail_intercept;
          }};
}

RateSpec load_table_rate(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kIo, "cannot open rate table '" + path + "'");
  std::optional<std::pair<double, double>> tail;
  std::vector<std::pair<std::int64_t, double>> rows;
  std::string line;
  std::int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first == "tail") {
      double slope, intercept;
      if (!(ls >> slope >> intercept)) throw Error(Errc::kConfigParse, path + ": bad tail header", line_no);
      tail = {slope, intercept};
      continue;
    }
    std::int64_t k;
    double g;
    std::istringstream ks(first);
    if (!(ks >> k) || !(ls >> g) || k < 0) throw Error(Errc::kConfigParse, path + ": expected `k g(k)`", line_no);
    rows.emplace_back(k, g);
  }
  if (!tail) throw Error(Errc::kConfigParse, path + ": missing `tail <slope> <intercept>` header", line_no);
  std::sort(rows.begin(), rows.end());
  std::vector<double> table(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].first != static_cast<std::int64_t>(i))
      throw Error(Errc::kConfigParse, path + ": table keys must be 0..K-1 without gaps");
    table[i] = rows[i].second;
  }
  return table_rate("table:" + path, std::move(table), tail->first, tail->second);
}

RateSpec parse_rate(const std::string& text) {
  if (text == "linear") return linear_rate();
  if (text == "linear_perturbed") return linear_perturbed_rate();
  if (text.rfind("table:", 0) == 0) return load_table_rate(text.substr(6));
  throw Error(Errc::kUnknownBuiltin, "unknown rate '" + text + "'");
}

RateFunction validate_rate(RateSpec spec, int b_hint, const RateCheckOptions& options) {
  if (!spec.evaluate) throw Error(Errc::kInvalidArgument, "rate has no evaluator");
  if (b_hint < 1) throw Error(Errc::kInvalidArgument, "gap lag b must be >= 1");
  const std::int64_t K = std::max<std::int64_t>(options.k_check, 2);

  RateFunction rate;
  rate.k_check_ = K;
  rate.b_ = b_hint;
  // Cache one lag past the checked range so the (M) scan stays in the cache.
  const std::int64_t cached = K + b_hint + 1;
  rate.values_.resize(static_cast<std::size_t>(cached));
  for (std::int64_t k = 0; k < cached; ++k) {
    const double g = spec.evaluate(k);
    if (!std::isfinite(g)) throw Error(Errc::kNonpositiveRate, "g(k) is not finite", k);
    if (k == 0 && g != 0.0) throw Error(Errc::kNonpositiveRate, "g(0) must be 0", 0);
    if (k >= 1 && !(g > 0.0)) throw Error(Errc::kNonpositiveRate, "g(k) must be positive", k);
    rate.values_[static_cast<std::size_t>(k)] = g;
  }
  const auto& g = rate.values_;

  double a1 = 0.0;
  for (std::int64_t n = 0; n < K; ++n) {
    const double inc = std::abs(g[n + 1] - g[n]);
    if (options.declared_a1 && inc > *options.declared_a1)
      throw Error(Errc::kConditionLGViolated, "increment exceeds declared a1", n);
    a1 = std::max(a1, inc);
  }
  double a0 = std::numeric_limits<double>::infinity();
  for (std::int64_t n = 0; n + b_hint <= K; ++n) {
    const double gap = g[n + b_hint] - g[n];
    if (!(gap > 0.0)) throw Error(Errc::kConditionMViolated, "g(n+b) - g(n) <= 0", n);
    a0 = std::min(a0, gap);
  }
  rate.a1_ = a1;
  rate.a0_ = a0;

  // Measured sandwich on the checked range, widened by the analytic tail
  // bounds g(k) <= a1 k and g(k) >~ (a0/b) k.
  double sandwich = 1.0;
  double max_ratio = 0.0;
  for (std::int64_t k = 1; k <= K; ++k) {
    const double ratio = g[k] / static_cast<double>(k);
    max_ratio = std::max(max_ratio, ratio);
    sandwich = std::max({sandwich, ratio, 1.0 / ratio});
  }
  rate.max_ratio_ = max_ratio;
  rate.a_ = std::max({sandwich, a1, static_cast<double>(b_hint) / a0});

  rate.log_factorials_.resize(g.size());
  rate.log_factorials_[0] = 0.0;
  for (std::size_t k = 1; k < g.size(); ++k) rate.log_factorials_[k] = rate.log_factorials_[k - 1] + std::log(g[k]);

  rate.spec_ = std::move(spec);
  return rate;
}

double RateFunction::log_g_factorial(std::int64_t k) const {
  if (k < 0) throw Error(Errc::kInvalidArgument, "log_g_factorial of negative k", k);
  const auto n = static_cast<std::int64_t>(log_factorials_.size());
  if (k < n) return log_factorials_[static_cast<std::size_t>(k)];
  double acc = log_factorials_.back();
  for (std::int64_t j = n; j <= k; ++j) acc += std::log(spec_.evaluate(j));
  return acc;
}

}  // namespace zrp
