#include "zrp_app/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "zrp/error.hpp"
#include "zrp/kernel/jump_kernel.hpp"
#include "zrp/kernel/rate_function.hpp"
#include "zrp/measures/profile.hpp"

namespace zrp::app {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

[[noreturn]] void parse_error(int line, const std::string& what) {
  throw Error(Errc::kConfigParse, "line " + std::to_string(line) + ": " + what, line);
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(v);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <class T>
T parse_number(const std::string& s, int line) {
  T v{};
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) parse_error(line, "not a number: '" + s + "'");
  return v;
}

struct Reader {
  const ConfigFile& file;

  template <class T>
  void number(const std::string& section, const std::string& key, T& out) const {
    if (auto v = file.get(section, key)) out = parse_number<T>(*v, file.line_of(section, key));
  }

  template <class T>
  void numbers(const std::string& section, const std::string& key, std::vector<T>& out) const {
    auto v = file.get(section, key);
    if (!v) return;
    const int line = file.line_of(section, key);
    out.clear();
    for (const auto& item : split_list(*v)) out.push_back(parse_number<T>(item, line));
    if (out.empty()) parse_error(line, key + " list is empty");
  }

  void string(const std::string& section, const std::string& key, std::string& out) const {
    if (auto v = file.get(section, key)) out = *v;
  }
};

const std::set<std::string>& known_keys(const std::string& section) {
  static const std::map<std::string, std::set<std::string>> keys{
      {"model", {"rate", "kernel", "profile"}},
      {"grid", {"N", "M", "dt_sde"}},
      {"run", {"T", "n_runs", "seed_base", "snapshot_interval", "event_cap", "record_intervals", "n_paths"}},
      {"verify", {"checks", "l", "j", "epsilon", "block", "statistic"}},
      {"output", {"directory"}},
  };
  static const std::set<std::string> none;
  auto it = keys.find(section);
  return it == keys.end() ? none : it->second;
}

}  // namespace

ConfigFile ConfigFile::parse(const std::string& text) {
  ConfigFile cfg;
  cfg.text_ = text;
  std::istringstream in(text);
  std::string raw, section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find_first_of("#;");
    const std::string s = trim(std::string_view(raw).substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']' || s.size() < 3) parse_error(line, "malformed section header");
      section = trim(std::string_view(s).substr(1, s.size() - 2));
      if (known_keys(section).empty()) parse_error(line, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) parse_error(line, "expected key = value");
    if (section.empty()) parse_error(line, "key outside any section");
    const std::string key = trim(std::string_view(s).substr(0, eq));
    const std::string value = trim(std::string_view(s).substr(eq + 1));
    if (key.empty()) parse_error(line, "empty key");
    const bool threshold = section == "verify" && key.rfind("threshold.", 0) == 0;
    if (!threshold && !known_keys(section).count(key)) parse_error(line, "unknown key '" + key + "' in [" + section + "]");
    if (value.empty()) parse_error(line, "empty value for '" + key + "'");
    auto& sec = cfg.sections_[section];
    if (sec.count(key)) parse_error(line, "duplicate key '" + key + "'");
    sec[key] = {value, line};
  }
  return cfg;
}

ConfigFile ConfigFile::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIo, "cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  auto it = sections_.find(section);
  return it != sections_.end() && it->second.count(key);
}

std::optional<std::string> ConfigFile::get(const std::string& section, const std::string& key) const {
  auto it = sections_.find(section);
  if (it == sections_.end()) return std::nullopt;
  auto kt = it->second.find(key);
  if (kt == it->second.end()) return std::nullopt;
  return kt->second.value;
}

int ConfigFile::line_of(const std::string& section, const std::string& key) const {
  auto it = sections_.find(section);
  if (it == sections_.end()) return 0;
  auto kt = it->second.find(key);
  return kt == it->second.end() ? 0 : kt->second.line;
}

std::vector<std::string> ConfigFile::keys(const std::string& section) const {
  std::vector<std::string> out;
  auto it = sections_.find(section);
  if (it != sections_.end())
    for (const auto& [k, v] : it->second) out.push_back(k);
  return out;
}

std::uint64_t fnv1a64(const std::string& bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t ExperimentConfig::hash() const noexcept { return fnv1a64(source_text); }

ExperimentConfig read_config(const ConfigFile& file) {
  ExperimentConfig c;
  c.source_text = file.text();
  const Reader r{file};
  r.string("model", "rate", c.model.rate);
  r.string("model", "kernel", c.model.kernel);
  r.string("model", "profile", c.model.profile);
  r.numbers("grid", "N", c.grid.N);
  r.number("grid", "M", c.grid.M);
  r.number("grid", "dt_sde", c.grid.dt_sde);
  r.number("run", "T", c.run.T);
  r.number("run", "n_runs", c.run.n_runs);
  r.number("run", "seed_base", c.run.seed_base);
  r.number("run", "snapshot_interval", c.run.snapshot_interval);
  r.number("run", "event_cap", c.run.event_cap);
  r.number("run", "record_intervals", c.run.record_intervals);
  r.number("run", "n_paths", c.run.n_paths);
  if (auto v = file.get("verify", "checks")) c.verify.checks = split_list(*v);
  r.numbers("verify", "l", c.verify.l);
  r.numbers("verify", "j", c.verify.j);
  r.numbers("verify", "epsilon", c.verify.epsilon);
  r.number("verify", "block", c.verify.block);
  r.string("verify", "statistic", c.verify.statistic);
  for (const auto& key : file.keys("verify")) {
    if (key.rfind("threshold.", 0) != 0) continue;
    const int line = file.line_of("verify", key);
    const double v = parse_number<double>(*file.get("verify", key), line);
    if (!(v > 0.0)) parse_error(line, "thresholds must be positive");
    c.verify.thresholds[key.substr(10)] = v;
  }
  r.string("output", "directory", c.output);

  auto positive = [&](const std::string& section, const std::string& key, bool ok) {
    if (!ok) parse_error(file.line_of(section, key), key + " must be positive");
  };
  positive("run", "T", c.run.T > 0.0);
  positive("run", "n_runs", c.run.n_runs > 0);
  positive("grid", "M", c.grid.M > 0);
  positive("grid", "dt_sde", c.grid.dt_sde > 0.0);
  positive("run", "record_intervals", c.run.record_intervals > 0);
  positive("run", "n_paths", c.run.n_paths > 0);
  if (c.run.snapshot_interval < 0.0) parse_error(file.line_of("run", "snapshot_interval"), "snapshot_interval must be >= 0");
  for (std::size_t n : c.grid.N) positive("grid", "N", n > 0);

  // Resolve builtins now so a bad name fails before any work starts.
  (void)parse_rate(c.model.rate);
  (void)parse_kernel(c.model.kernel);
  (void)parse_profile(c.model.profile);
  return c;
}

ExperimentConfig load_config(const std::string& path) { return read_config(ConfigFile::load(path)); }

}  // namespace zrp::app
