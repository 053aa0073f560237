#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace zrp::app {

// Raw `[section]` / `key = value` contents with the line each key came from.
class ConfigFile {
 public:
  static ConfigFile parse(const std::string& text);
  static ConfigFile load(const std::string& path);

  bool has(const std::string& section, const std::string& key) const;
  std::optional<std::string> get(const std::string& section, const std::string& key) const;
  int line_of(const std::string& section, const std::string& key) const;
  const std::string& text() const noexcept { return text_; }
  std::vector<std::string> keys(const std::string& section) const;

 private:
  struct Entry {
    std::string value;
    int line = 0;
  };
  std::map<std::string, std::map<std::string, Entry>> sections_;
  std::string text_;
};

struct ModelConfig {
  std::string rate = "linear";
  std::string kernel = "nn";
  std::string profile = "const:1";
};

struct GridConfig {
  std::vector<std::size_t> N{128};
  std::size_t M = 512;
  double dt_sde = 1e-4;
};

struct RunConfig {
  double T = 0.1;
  std::size_t n_runs = 10;
  std::uint64_t seed_base = 1;
  // Macro interval between configuration snapshots; 0 disables them.
  double snapshot_interval = 0.0;
  std::uint64_t event_cap = 2'000'000'000ULL;
  std::size_t record_intervals = 100;
  std::size_t n_paths = 1000;
};

struct VerifyConfig {
  std::vector<std::string> checks;
  std::map<std::string, double> thresholds;
  std::vector<int> l{1, 2, 3};
  std::vector<int> j{2, 3, 4, 5, 6, 7, 8};
  std::vector<double> epsilon{0.0625};
  int block = 10;
  std::string statistic = "local_replacement";
};

struct ExperimentConfig {
  ModelConfig model;
  GridConfig grid;
  RunConfig run;
  VerifyConfig verify;
  std::string output = "zrp_out";
  std::string source_text;

  // FNV-1a 64 of the config text.
  std::uint64_t hash() const noexcept;
};

// Typed view with defaults; throws ConfigParse(line) on malformed values and
// UnknownBuiltin for rate/kernel/profile names that do not resolve.
ExperimentConfig read_config(const ConfigFile& file);
ExperimentConfig load_config(const std::string& path);

std::uint64_t fnv1a64(const std::string& bytes) noexcept;

}  // namespace zrp::app
