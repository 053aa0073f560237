#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "zrp_app/campaigns.hpp"
#include "zrp_app/config.hpp"

namespace zrp::app {

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitRuntime = 2, kExitVerification = 3 };

struct CommandOptions {
  std::string subcommand;
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::string> axis;
};

// Runs one subcommand end to end and maps failures to exit codes. Artifacts
// and manifest.json go to --out or [output] directory.
int run_command(const CommandOptions& options, std::ostream& out, std::ostream& err);

// The checks named in [verify] checks (all of them when the list is empty).
std::vector<CheckResult> run_verify_checks(const ExperimentConfig& config, std::ostream& log);
std::vector<std::string> known_checks();

SweepTable run_sweep(const ExperimentConfig& config, const std::string& axis);

void write_report_json(const std::vector<CheckResult>& results, std::ostream& out);

}  // namespace zrp::app
