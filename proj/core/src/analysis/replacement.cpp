#include "zrp/analysis/replacement.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "zrp/error.hpp"

namespace zrp {

namespace {

constexpr double kPmfCutoff = 1e-16;

std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  while (out.size() > 1 && out.back() < kPmfCutoff) out.pop_back();
  return out;
}

void check_snapshots(const TrajectoryRecord& traj, std::optional<double> max_spacing) {
  const auto& snaps = traj.snapshots;
  if (snaps.size() < 2) throw Error(Errc::kInsufficientSnapshots, "need at least two snapshots");
  const double start = traj.start_micro_time / (static_cast<double>(traj.N) * static_cast<double>(traj.N));
  if (std::abs(snaps.front().t - start) > 1e-12) throw Error(Errc::kInsufficientSnapshots, "snapshots must start at the record start");
  if (!max_spacing) return;
  for (std::size_t i = 1; i < snaps.size(); ++i)
    if (snaps[i].t - snaps[i - 1].t > *max_spacing * (1.0 + 1e-9))
      throw Error(Errc::kInsufficientSnapshots, "snapshot spacing exceeds eps^2 / 4", static_cast<std::int64_t>(i));
}

// Periodic window sums of width 2L+1 centred at the frame sites x, in the
// environment view of a snapshot.
std::vector<std::int64_t> window_sums(const Snapshot& s, int L) {
  const std::size_t N = s.occ.size();
  const std::size_t X = s.tagged_site;
  auto eta = [&](std::int64_t x) {
    const auto n = static_cast<std::int64_t>(N);
    return s.occ[(static_cast<std::size_t>(((x % n) + n) % n) + X) % N];
  };
  std::vector<std::int64_t> out(N);
  std::int64_t acc = 0;
  for (std::int64_t y = -L; y <= L; ++y) acc += eta(y);
  for (std::size_t x = 0; x < N; ++x) {
    out[x] = acc;
    const auto xi = static_cast<std::int64_t>(x);
    acc += eta(xi + L + 1) - eta(xi - L);
  }
  return out;
}

double trapezoid(const std::vector<Snapshot>& snaps, const std::vector<double>& f) {
  double acc = 0.0;
  for (std::size_t i = 1; i < snaps.size(); ++i) acc += 0.5 * (f[i] + f[i - 1]) * (snaps[i].t - snaps[i - 1].t);
  return acc;
}

}  // namespace

BlockSmoothedExpectation::BlockSmoothedExpectation(const Thermodynamics& thermo, SiteFunction h, int l)
    : thermo_(thermo), h_(std::move(h)), l_(l) {
  if (l < 0) throw Error(Errc::kInvalidArgument, "block size must be non-negative");
}

double BlockSmoothedExpectation::grand(double a) const { return thermo_.expectation(h_, a, Ensemble::kNu); }

double BlockSmoothedExpectation::grand_at_sum(std::int64_t s) const {
  auto it = grand_cache_.find(s);
  if (it != grand_cache_.end()) return it->second;
  const double v = grand(static_cast<double>(s) / (2.0 * l_ + 1.0));
  grand_cache_.emplace(s, v);
  return v;
}

double BlockSmoothedExpectation::operator()(double rho) const {
  auto it = smoothed_cache_.find(rho);
  if (it != smoothed_cache_.end()) return it->second;
  double v;
  if (rho == 0.0) {
    v = grand_at_sum(0);
  } else {
    const std::vector<double> site = thermo_.pmf(rho, Ensemble::kMu, kPmfCutoff);
    std::vector<double> block = site;
    for (int i = 0; i < 2 * l_; ++i) block = convolve(block, site);
    double mass = 0.0;
    v = 0.0;
    for (std::size_t s = 0; s < block.size(); ++s) {
      if (block[s] == 0.0) continue;
      v += block[s] * grand_at_sum(static_cast<std::int64_t>(s));
      mass += block[s];
    }
    v /= mass;
  }
  smoothed_cache_.emplace(rho, v);
  return v;
}

double local_replacement_gap(const TrajectoryRecord& traj, const BlockSmoothedExpectation& hbar, double eps,
                             std::optional<std::size_t> origin_observable) {
  if (!(eps > 0.0) || eps > 0.5) throw Error(Errc::kInvalidArgument, "eps must lie in (0, 1/2]");
  check_snapshots(traj, eps * eps / 4.0);
  const std::size_t N = traj.N;
  const auto K = static_cast<int>(std::max<long long>(1, std::llround(eps * static_cast<double>(N))));
  if (2 * static_cast<std::size_t>(K) + 1 > N) throw Error(Errc::kInvalidArgument, "block wider than the torus");
  const auto& snaps = traj.snapshots;
  const double t_end = snaps.back().t;
  const double width = 2.0 * K + 1.0;

  std::vector<double> block(snaps.size()), origin(snaps.size());
  for (std::size_t i = 0; i < snaps.size(); ++i) {
    const auto sums = window_sums(snaps[i], K);
    double acc = 0.0;
    for (int x = 1; x <= K; ++x) acc += hbar(static_cast<double>(sums[static_cast<std::size_t>(x)]) / width);
    block[i] = acc / K;
    origin[i] = hbar.h()(snaps[i].occ[snaps[i].tagged_site]);
  }

  double origin_integral = trapezoid(snaps, origin);
  if (origin_observable) {
    if (*origin_observable >= traj.origin_integrals.size())
      throw Error(Errc::kInvalidArgument, "origin observable index out of range");
    const auto it = std::find_if(traj.times.begin(), traj.times.end(),
                                 [&](double t) { return std::abs(t - t_end) <= 1e-12 * std::max(1.0, t_end); });
    if (it == traj.times.end()) throw Error(Errc::kInsufficientSnapshots, "last snapshot time is not a sample time");
    origin_integral = traj.origin_integrals[*origin_observable][static_cast<std::size_t>(it - traj.times.begin())];
  }
  return std::abs(origin_integral - trapezoid(snaps, block));
}

double local_replacement_gap(const TrajectoryRecord& traj, const Thermodynamics& thermo, const SiteFunction& h, int l,
                             double eps) {
  return local_replacement_gap(traj, BlockSmoothedExpectation(thermo, h, l), eps);
}

double SiteMean::operator()(double a) const {
  auto it = cache_.find(a);
  if (it != cache_.end()) return it->second;
  const double v = thermo_.expectation(r_, a, Ensemble::kMu);
  cache_.emplace(a, v);
  return v;
}

double global_replacement_gap(const TrajectoryRecord& traj, const SiteMean& rbar, int L) {
  check_snapshots(traj, std::nullopt);
  const std::size_t N = traj.N;
  if (L < 0 || 2 * static_cast<std::size_t>(L) + 1 > N) throw Error(Errc::kInvalidArgument, "block wider than the torus");
  const auto& snaps = traj.snapshots;
  const double width = 2.0 * L + 1.0;
  std::vector<double> f(snaps.size());
  for (std::size_t i = 0; i < snaps.size(); ++i) {
    const auto sums = window_sums(snaps[i], L);
    // Same window over r(eta(.)); the frame shift does not matter for the
    // spatial average, so the fixed-frame occupancies are used directly.
    std::vector<double> r(N);
    for (std::size_t x = 0; x < N; ++x) r[x] = rbar.r()(snaps[i].occ[(x + snaps[i].tagged_site) % N]);
    double racc = 0.0;
    for (int y = -L; y <= L; ++y) racc += r[static_cast<std::size_t>((y + static_cast<int>(N)) % static_cast<int>(N))];
    double acc = 0.0;
    for (std::size_t x = 0; x < N; ++x) {
      acc += std::abs(racc / width - rbar(static_cast<double>(sums[x]) / width));
      racc += r[(x + L + 1) % N] - r[(x + N - static_cast<std::size_t>(L)) % N];
    }
    f[i] = acc / static_cast<double>(N);
  }
  const double span = snaps.back().t - snaps.front().t;
  if (!(span > 0.0)) throw Error(Errc::kInsufficientSnapshots, "snapshots span no time");
  return trapezoid(snaps, f) / span;
}

double global_replacement_gap(const TrajectoryRecord& traj, const Thermodynamics& thermo, const SiteFunction& r,
                              int L) {
  return global_replacement_gap(traj, SiteMean(thermo, r), L);
}

}  // namespace zrp
