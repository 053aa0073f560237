#include <cmath>

#include "zrp/analysis/observables.hpp"
#include "zrp/error.hpp"

namespace zrp {

namespace {

// Integrand state of the compensator in the tagged frame.
class CompensatorState {
 public:
  CompensatorState(const TrajectoryRecord& traj, const TestFunction& G, const JumpKernel& kernel,
                   const RateFunction& rate)
      : rate_(rate), N_(traj.N), xi_(traj.initial.occ), X_(traj.initial.tagged_site.value()) {
    const double n = static_cast<double>(N_);
    g_.resize(N_);
    d_.resize(N_);
    for (std::size_t x = 0; x < N_; ++x) {
      const double u = static_cast<double>(x) / n;
      g_[x] = G(u);
      d_[x] = discrete_laplacian(G, kernel, N_, u);
    }
    recompute();
  }

  double pi() const { return pi_; }

  double integrand() const {
    const double n = static_cast<double>(N_);
    const std::int32_t k0 = xi_[X_];
    const double q = rate_(k0) / k0;
    return s1_ / n + q * s2_ - 2.0 / n * q * d_[0];
  }

  void apply(const LoggedEvent& e) {
    if (e.tagged) {
      --xi_[e.from];
      ++xi_[e.to];
      X_ = e.to;
      recompute();
      return;
    }
    const double n = static_cast<double>(N_);
    const std::size_t x = frame(e.from), y = frame(e.to);
    const std::int32_t kx = xi_[e.from], ky = xi_[e.to];
    pi_ += (g_[y] - g_[x]) / n;
    s2_ += (d_[y] - d_[x]) / n;
    s1_ += d_[x] * (rate_(kx - 1) - rate_(kx)) + d_[y] * (rate_(ky + 1) - rate_(ky));
    --xi_[e.from];
    ++xi_[e.to];
  }

 private:
  std::size_t frame(std::size_t site) const { return (site + N_ - X_) % N_; }

  void recompute() {
    const double n = static_cast<double>(N_);
    pi_ = s1_ = s2_ = 0.0;
    for (std::size_t x = 0; x < N_; ++x) {
      const std::int32_t k = xi_[(x + X_) % N_];
      pi_ += g_[x] * k;
      s2_ += d_[x] * k;
      s1_ += d_[x] * rate_(k);
    }
    pi_ /= n;
    s2_ /= n;
  }

  const RateFunction& rate_;
  std::size_t N_;
  std::vector<std::int32_t> xi_;
  std::size_t X_;
  std::vector<double> g_, d_;
  double pi_ = 0.0, s1_ = 0.0, s2_ = 0.0;
};

}  // namespace

std::vector<double> field_martingale(const TrajectoryRecord& traj, const TestFunction& G, const JumpKernel& kernel,
                                     const RateFunction& rate) {
  if (!kernel.is_nearest_neighbor()) throw Error(Errc::kUnsupportedKernel, "field martingale needs p(1) = p(-1) = 1/2");
  if (!traj.events_recorded) throw Error(Errc::kInvalidArgument, "trajectory was recorded without its event log");

  CompensatorState state(traj, G, kernel, rate);
  const double scale = static_cast<double>(traj.N) * static_cast<double>(traj.N);
  const double pi0 = state.pi();
  double compensator = 0.0;
  double t_prev = traj.start_micro_time;
  std::size_t e = 0;
  std::vector<double> out;
  out.reserve(traj.times.size());
  for (double t_macro : traj.times) {
    const double s = t_macro * scale;
    while (e < traj.events.size() && traj.events[e].micro_time <= s) {
      compensator += state.integrand() * (traj.events[e].micro_time - t_prev) / scale;
      t_prev = traj.events[e].micro_time;
      state.apply(traj.events[e]);
      ++e;
    }
    compensator += state.integrand() * (s - t_prev) / scale;
    t_prev = s;
    out.push_back(state.pi() - pi0 - compensator);
  }
  return out;
}

}  // namespace zrp
