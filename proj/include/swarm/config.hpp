#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "swarm/engine.hpp"
#include "swarm/extensions.hpp"
#include "swarm/geometry.hpp"
#include "swarm/metrics.hpp"
#include "swarm/model.hpp"

namespace swarm {

/// Built-in arenas: "empty", "central-obstacle", "c-shape".
Arena scenario_arena(std::string_view name);
std::vector<std::string> scenario_names();

enum class Source { Default, File, Flag };
const char* to_string(Source source);

struct RunConfig {
  std::string scenario = "empty";
  SimParams params;
  Arena arena;
  ExtensionParams extensions;
  std::filesystem::path out_dir = "out";
  int snapshot_every = 1;
  // render / metrics settings
  std::optional<std::int64_t> at_step;
  bool plots = false;
  std::optional<Window> window;

  // Where each setting came from, keyed by its config path ("params.seed").
  std::map<std::string, Source> sources;
};

struct SweepConfig {
  RunConfig base;
  std::vector<int> sizes{49, 73, 100, 120, 157};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
  std::vector<std::string> scenarios{"empty", "central-obstacle"};
  int jobs = 1;
  int snapshot_every = 5;

  /// Throws swarm::Error on empty sizes/seeds/scenarios or bad values.
  void validate() const;
};

/// Flags given on the command line; each has a config-file key.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> n_agents;
  std::optional<std::string> scenario;
  std::optional<std::filesystem::path> out_dir;
  std::optional<bool> extension;
  std::optional<std::int64_t> at_step;
  std::optional<bool> plots;
  std::optional<Window> window;
};

RunConfig default_run_config();

/// Parses the YAML config text. Errors are swarm::Error with messages of
/// the form "<origin>:<line>:<col>: <what>".
RunConfig parse_run_config(std::string_view text, std::string_view origin = "<config>");
RunConfig load_run_config(const std::filesystem::path& path);

/// A run config plus an optional `sweep:` block.
SweepConfig parse_sweep_config(std::string_view text, std::string_view origin = "<config>");
SweepConfig load_sweep_config(const std::filesystem::path& path);

void apply_overrides(RunConfig& config, const Overrides& overrides);
void apply_overrides(SweepConfig& config, const Overrides& overrides);

/// Full validation of the effective configuration; returns warnings.
std::vector<std::string> validate(const RunConfig& config);

/// One "key = value (source)" line per setting.
std::string describe(const RunConfig& config);

}  // namespace swarm
