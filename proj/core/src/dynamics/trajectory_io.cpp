#include "zrp/dynamics/trajectory_io.hpp"

#include <cstdio>
#include <fstream>

#include "zrp/error.hpp"

namespace zrp {

std::string format_number(double v) {
  // snprintf honours the C locale, which the library never changes.
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(n));
}

void write_trajectory_csv(const TrajectoryRecord& record, std::ostream& out) {
  out << "t,x,qv\n";
  for (std::size_t i = 0; i < record.times.size(); ++i)
    out << format_number(record.times[i]) << ',' << format_number(record.x[i]) << ','
        << format_number(record.qv[i]) << '\n';
}

void write_snapshots(const TrajectoryRecord& record, std::ostream& out) {
  for (const auto& snap : record.snapshots) {
    out << format_number(snap.t);
    for (const auto k : snap.occ) out << ' ' << k;
    out << '\n';
  }
}

namespace {
template <typename Writer>
void write_file(const std::string& path, Writer&& writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::kIo, "cannot write '" + path + "'");
  writer(out);
  if (!out) throw Error(Errc::kIo, "write failed for '" + path + "'");
}
}  // namespace

void write_trajectory_csv(const TrajectoryRecord& record, const std::string& path) {
  write_file(path, [&](std::ostream& out) { write_trajectory_csv(record, out); });
}

void write_snapshots(const TrajectoryRecord& record, const std::string& path) {
  write_file(path, [&](std::ostream& out) { write_snapshots(record, out); });
}

}  // namespace zrp
