#include <CLI11.hpp>
#include <iostream>

#include "zrp_app/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"zero-range process simulator and verification runner"};
  app.require_subcommand(1);
  zrp::app::CommandOptions options;
  for (const char* name : {"thermo", "hydro", "simulate", "sde", "verify", "gap", "sweep"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", options.config_path, "experiment config")->required();
    sub->add_option("--out", options.out_dir, "artifact directory");
    if (std::string(name) == "sweep") sub->add_option("--axis", options.axis, "N, l or epsilon")->required();
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return zrp::app::kExitConfig;
  }
  options.subcommand = app.get_subcommands().front()->get_name();
  return zrp::app::run_command(options, std::cout, std::cerr);
}
