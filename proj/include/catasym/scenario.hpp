#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "catasym/space.hpp"

namespace catasym {

/// Flat key=value configuration with one optional [section] per experiment;
/// section keys override the global ones.
struct ScenarioConfig {
  std::string experiment;
  std::map<std::string, std::string> values;

  bool has(const std::string& key) const { return values.count(key) > 0; }
  std::string get(const std::string& key, const std::string& fallback) const;
  double get_num(const std::string& key, double fallback) const;
  std::uint64_t get_seed() const;
  std::vector<double> get_list(const std::string& key,
                               const std::vector<double>& fallback) const;
};

/// Parses the config file and merges the experiment's section over the
/// global keys. Throws ContractViolation on malformed lines or an unknown
/// experiment name.
ScenarioConfig load_config(const std::string& path,
                           const std::string& experiment);

ScenarioConfig config_from_text(const std::string& text,
                                const std::string& experiment);

inline constexpr int kExitOk = 0;
inline constexpr int kExitAssertionFailure = 1;
inline constexpr int kExitConfigError = 2;

/// Runs the experiment, writing report.json and the experiment's CSV tables
/// under the configured output directory. Returns kExitOk iff every enabled
/// assertion passed.
int run_scenario(const ScenarioConfig& config);

const std::vector<std::string>& known_experiments();

}  // namespace catasym
