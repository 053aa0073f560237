#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace zrp {

// Complete binary sum tree over per-site rates. Every update recomputes the
// ancestors from their children, so total() never drifts from the sum of the
// leaves. O(log N) update and sample.
class RateTree {
 public:
  RateTree() = default;
  explicit RateTree(std::span<const double> weights);

  std::size_t size() const noexcept { return size_; }
  double total() const noexcept { return nodes_.empty() ? 0.0 : nodes_[1]; }
  double weight(std::size_t i) const noexcept { return nodes_[leaves_ + i]; }

  void set(std::size_t i, double w) noexcept {
    std::size_t p = leaves_ + i;
    nodes_[p] = w;
    for (p >>= 1; p != 0; p >>= 1) nodes_[p] = nodes_[2 * p] + nodes_[2 * p + 1];
  }

  // Leaf i with prefix(i) <= u < prefix(i) + w_i for u in [0, total()).
  // Never returns a zero-weight leaf.
  std::size_t sample(double u) const noexcept {
    std::size_t p = 1;
    while (p < leaves_) {
      const double left = nodes_[2 * p];
      if ((u < left && left > 0.0) || nodes_[2 * p + 1] <= 0.0) {
        p = 2 * p;
      } else {
        u -= left;
        p = 2 * p + 1;
      }
    }
    return p - leaves_;
  }

 private:
  std::size_t size_ = 0;
  std::size_t leaves_ = 0;
  std::vector<double> nodes_;
};

inline RateTree::RateTree(std::span<const double> weights) : size_(weights.size()) {
  leaves_ = 1;
  while (leaves_ < size_) leaves_ <<= 1;
  nodes_.assign(2 * leaves_, 0.0);
  for (std::size_t i = 0; i < size_; ++i) nodes_[leaves_ + i] = weights[i];
  for (std::size_t p = leaves_ - 1; p != 0; --p) nodes_[p] = nodes_[2 * p] + nodes_[2 * p + 1];
}

}  // namespace zrp
