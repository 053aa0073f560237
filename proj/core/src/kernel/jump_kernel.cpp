#include "zrp/kernel/jump_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numeric>

#include "zrp/error.hpp"

namespace zrp {

JumpKernel::JumpKernel(std::vector<Jump> support) {
  std::map<int, double> merged;
  for (const auto& [z, p] : support) {
    if (z == 0) throw Error(Errc::kInvalidArgument, "jump kernel support must exclude z = 0");
    if (!(p >= 0.0) || !std::isfinite(p)) throw Error(Errc::kInvalidArgument, "jump probabilities must be finite and >= 0");
    if (p > 0.0) merged[z] += p;
  }
  if (merged.empty()) throw Error(Errc::kInvalidArgument, "jump kernel has empty support");
  double total = 0.0, mean = 0.0;
  int g = 0;
  for (const auto& [z, p] : merged) {
    support_.push_back({z, p});
    total += p;
    mean += z * p;
    sigma2_ += static_cast<double>(z) * z * p;
    range_ = std::max(range_, std::abs(z));
    g = std::gcd(g, std::abs(z));
  }
  if (std::abs(total - 1.0) > 1e-12) throw Error(Errc::kInvalidArgument, "jump probabilities must sum to 1");
  if (std::abs(mean) > 1e-12) throw Error(Errc::kInvalidArgument, "jump kernel must have mean zero");
  if (g != 1) throw Error(Errc::kInvalidArgument, "jump kernel is not irreducible on Z");
  double acc = 0.0;
  for (const auto& j : support_) {
    acc += j.p;
    cumulative_.push_back(acc);
  }
}

JumpKernel JumpKernel::nearest_neighbor() { return JumpKernel({{-1, 0.5}, {1, 0.5}}); }

JumpKernel JumpKernel::uniform(int range) {
  if (range < 1) throw Error(Errc::kInvalidArgument, "uniform kernel range must be >= 1");
  std::vector<Jump> s;
  const double p = 1.0 / (2.0 * range);
  for (int z = 1; z <= range; ++z) {
    s.push_back({-z, p});
    s.push_back({z, p});
  }
  return JumpKernel(std::move(s));
}

double JumpKernel::p(int z) const noexcept {
  for (const auto& j : support_)
    if (j.z == z) return j.p;
  return 0.0;
}

bool JumpKernel::is_symmetric() const noexcept {
  return std::all_of(support_.begin(), support_.end(),
                     [this](const Jump& j) { return std::abs(p(-j.z) - j.p) <= 1e-15; });
}

bool JumpKernel::is_nearest_neighbor() const noexcept {
  return support_.size() == 2 && range_ == 1 && is_symmetric();
}

JumpKernel parse_kernel(const std::string& text) {
  if (text == "nn") return JumpKernel::nearest_neighbor();
  if (text.rfind("uniform:", 0) == 0) {
    char* end = nullptr;
    const long r = std::strtol(text.c_str() + 8, &end, 10);
    if (end == text.c_str() + 8 || *end != '\0') throw Error(Errc::kUnknownBuiltin, "bad kernel '" + text + "'");
    return JumpKernel::uniform(static_cast<int>(r));
  }
  throw Error(Errc::kUnknownBuiltin, "unknown kernel '" + text + "'");
}

}  // namespace zrp
