#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace zrp {

// Unvalidated description of a jump rate g: N0 -> R+.
struct RateSpec {
  std::string name;
  std::function<double(std::int64_t)> evaluate;
};

// g(k) = k: independent walkers.
RateSpec linear_rate();
// g(k) = k + (1 - e^{-k}).
RateSpec linear_perturbed_rate();
// Tabulated rate, g(k) = table[k] for k < table.size() and
// g(k) = tail_slope * k + tail_intercept beyond the table.
RateSpec table_rate(std::string name, std::vector<double> table, double tail_slope,
                    double tail_intercept);
// Reads a table file: a `tail <slope> <intercept>` header followed by `k g(k)`
// lines ('#' starts a comment). Keys 0..K-1 must all be present.
RateSpec load_table_rate(const std::string& path);
// Resolves `linear`, `linear_perturbed` or `table:<path>`.
RateSpec parse_rate(const std::string& text);

struct RateCheckOptions {
  std::int64_t k_check = 10000;
  // When set, an increment larger than this bound is a (LG) violation.
  std::optional<double> declared_a1;
};

// A validated jump rate with its structural constants. Values and log g(k)! are
// cached over the checked range; beyond it the evaluator is called directly.
class RateFunction {
 public:
  double operator()(std::int64_t k) const {
    return k < static_cast<std::int64_t>(values_.size()) ? values_[static_cast<std::size_t>(k)]
                                                         : spec_.evaluate(k);
  }

  // sum_{j=1..k} ln g(j); 0 for k = 0.
  double log_g_factorial(std::int64_t k) const;

  const std::string& name() const noexcept { return spec_.name; }
  double a0() const noexcept { return a0_; }
  double a1() const noexcept { return a1_; }
  int b() const noexcept { return b_; }
  // Two-sided slope constant: k/a <= g(k) <= a k.
  double a() const noexcept { return a_; }
  std::int64_t checked_range() const noexcept { return k_check_; }

  // sup_k g(k)/k over the checked range, the bound on the tagged jump rate.
  double max_rate_per_particle() const noexcept { return max_ratio_; }

  // Cached g(k) for k in [0, checked_range]; hot loops index this directly.
  const std::vector<double>& cached_values() const noexcept { return values_; }

 private:
  friend RateFunction validate_rate(RateSpec spec, int b_hint, const RateCheckOptions& options);
  RateFunction() = default;

  RateSpec spec_;
  std::vector<double> values_;
  std::vector<double> log_factorials_;
  double a0_ = 0.0;
  double a1_ = 0.0;
  int b_ = 1;
  double a_ = 1.0;
  double max_ratio_ = 1.0;
  std::int64_t k_check_ = 0;
};

// Checks g(0) = 0, g(k) > 0, (LG) and (M) with lag b_hint over k <= k_check and
// records the measured constants.
RateFunction validate_rate(RateSpec spec, int b_hint = 1, const RateCheckOptions& options = {});

}  // namespace zrp
