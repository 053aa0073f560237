#pragma once

#include <string>
#include <utility>
#include <vector>

namespace zrp {

// Finite-range, mean-zero, irreducible transition probability p(.) on Z.
class JumpKernel {
 public:
  struct Jump {
    int z;
    double p;
  };

  // Validates sum p = 1, sum z p = 0, z != 0 and gcd(support) = 1.
  explicit JumpKernel(std::vector<Jump> support);

  // p(1) = p(-1) = 1/2.
  static JumpKernel nearest_neighbor();
  // Uniform over {-R..R} \ {0}.
  static JumpKernel uniform(int range);

  const std::vector<Jump>& support() const noexcept { return support_; }
  double sigma2() const noexcept { return sigma2_; }
  int range() const noexcept { return range_; }
  double p(int z) const noexcept;
  bool is_symmetric() const noexcept;
  bool is_nearest_neighbor() const noexcept;

  // Displacement for a uniform variate u in [0, 1).
  int sample(double u) const noexcept {
    for (std::size_t i = 0; i + 1 < cumulative_.size(); ++i)
      if (u < cumulative_[i]) return support_[i].z;
    return support_.back().z;
  }

 private:
  std::vector<Jump> support_;
  std::vector<double> cumulative_;
  double sigma2_ = 0.0;
  int range_ = 0;
};

// Resolves `nn` or `uniform:<R>`.
JumpKernel parse_kernel(const std::string& text);

}  // namespace zrp
