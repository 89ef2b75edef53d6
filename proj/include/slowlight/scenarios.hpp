#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "slowlight/config.hpp"
#include "slowlight/csv.hpp"

namespace slowlight {

struct RunReport {
  std::string scenario;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::vector<std::string> files;
  // Every entry is also written to <scenario>_summary.csv.
  KeyValues headline;
  std::vector<std::string> warnings;
  double wall_seconds = 0.0;

  double value(std::string_view key) const;  // throws if absent
};

std::vector<std::string> preset_names();

// Parameters of a named preset. Unknown names throw InvalidArgument listing
// the available presets.
ScenarioConfig preset(std::string_view name);

// Runs cfg.scenario (a preset name). Output goes to cfg.out_dir.
RunReport run_scenario(const ScenarioConfig& cfg);

// Building blocks behind the CLI subcommands; they use cfg as given.
RunReport run_scan(const ScenarioConfig& cfg);
RunReport run_pulse(const ScenarioConfig& cfg);
RunReport run_sweep(const ScenarioConfig& cfg);

}  // namespace slowlight
