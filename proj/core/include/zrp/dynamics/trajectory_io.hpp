#pragma once

#include <ostream>
#include <string>

#include "zrp/dynamics/simulation.hpp"

namespace zrp {

// `t,x,qv` header then one row per sample time, 17 significant digits.
void write_trajectory_csv(const TrajectoryRecord& record, std::ostream& out);
// One line per snapshot: `t` followed by the N plain-frame occupancies.
void write_snapshots(const TrajectoryRecord& record, std::ostream& out);

void write_trajectory_csv(const TrajectoryRecord& record, const std::string& path);
void write_snapshots(const TrajectoryRecord& record, const std::string& path);

// Shared number formatting for every text artifact: `.` separator, %.17g.
std::string format_number(double v);

}  // namespace zrp
