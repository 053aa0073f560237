#include "zrp/hydro/grid_field.hpp"

#include <algorithm>
#include <cmath>

#include "zrp/dynamics/trajectory_io.hpp"
#include "zrp/error.hpp"

namespace zrp {

double GridField::mass(std::size_t n) const noexcept {
  double acc = 0.0;
  for (double v : row(n)) acc += v;
  return acc / static_cast<double>(M);
}

double GridField::max_value() const noexcept {
  return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

namespace {

double lerp_space(const GridField& f, std::size_t n, double u) {
  const double s = (u - std::floor(u)) * static_cast<double>(f.M);
  auto i = static_cast<std::size_t>(s);
  if (i >= f.M) i = f.M - 1;
  const double w = s - static_cast<double>(i);
  const std::size_t j = i + 1 == f.M ? 0 : i + 1;
  return (1.0 - w) * f.at(n, i) + w * f.at(n, j);
}

double lerp_time(const GridField& f, std::size_t n, double t, double u) {
  if (n + 1 >= f.times.size()) return lerp_space(f, f.times.size() - 1, u);
  const double t0 = f.times[n], t1 = f.times[n + 1];
  const double w = std::clamp((t - t0) / (t1 - t0), 0.0, 1.0);
  if (w == 0.0) return lerp_space(f, n, u);
  if (w == 1.0) return lerp_space(f, n + 1, u);
  return (1.0 - w) * lerp_space(f, n, u) + w * lerp_space(f, n + 1, u);
}

void check_time(const GridField& f, double t) {
  const double slack = 1e-12 * std::max(1.0, std::abs(f.times.back()));
  if (f.times.empty() || t < f.times.front() - slack || t > f.times.back() + slack)
    throw Error(Errc::kOutOfRange, "time outside the solved interval");
}

}  // namespace

double interpolate_density(const GridField& field, double t, double u) {
  check_time(field, t);
  auto it = std::upper_bound(field.times.begin(), field.times.end(), t);
  const std::size_t n = it == field.times.begin() ? 0 : static_cast<std::size_t>(it - field.times.begin()) - 1;
  return lerp_time(field, n, t, u);
}

double FieldCursor::operator()(double t, double u) {
  const auto& times = field_->times;
  if (t < times[n_]) {
    check_time(*field_, t);
    n_ = 0;
  }
  while (n_ + 1 < times.size() && times[n_ + 1] <= t) ++n_;
  if (n_ + 1 == times.size()) check_time(*field_, t);
  return lerp_time(*field_, n_, t, u);
}

void write_field_csv(const GridField& field, std::ostream& out) {
  out << "t,u,rho\n";
  for (std::size_t n = 0; n < field.times.size(); ++n)
    for (std::size_t i = 0; i < field.M; ++i)
      out << format_number(field.times[n]) << ',' << format_number(static_cast<double>(i) / static_cast<double>(field.M))
          << ',' << format_number(field.at(n, i)) << '\n';
}

}  // namespace zrp
