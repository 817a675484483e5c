#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "swarm/extensions.hpp"
#include "swarm/geometry.hpp"
#include "swarm/model.hpp"
#include "swarm/rng.hpp"

namespace swarm {

inline constexpr int kLogSchemaVersion = 1;

struct AgentSnapshot {
  int id = 0;
  Vec2 pos;
  double heading = 0.0;
  AgentMode mode = AgentMode::SeekTarget;
  bool released = false;
  // Present iff mode == Beacon.
  std::optional<BeaconBroadcast> memory;
};

struct TransitionEvent {
  int id = 0;
  AgentMode from = AgentMode::SeekTarget;
  AgentMode to = AgentMode::SeekTarget;
};

struct DriftEvent {
  int id = 0;
  Vec2 velocity;
};

/// State after step `step` (record 0 is the initial state). `agents` is
/// empty on steps that are not snapshot steps; transitions are always kept.
struct StepRecord {
  std::int64_t step = 0;
  std::vector<AgentSnapshot> agents;
  std::vector<TransitionEvent> transitions;
  std::vector<DriftEvent> drift;
  int coverage_gaps = 0;

  bool has_snapshot() const { return !agents.empty(); }
};

struct LogHeader {
  int schema_version = kLogSchemaVersion;
  std::string rng_algorithm;
  std::string code_version;
  SimParams params;
  Arena arena;
  ExtensionParams extensions;
  int snapshot_every = 1;
};

struct EventLog {
  LogHeader header;
  std::vector<StepRecord> records;

  double time_of(std::int64_t step) const { return static_cast<double>(step) * header.params.tau_s; }
  /// Last record carrying agent positions at or before `step`.
  const StepRecord* snapshot_at_or_before(std::int64_t step) const;
  const StepRecord& final_snapshot() const;
};

struct SimState {
  std::int64_t step = 0;
  std::vector<Agent> agents;
  SimParams params;
  Arena arena;
  ExtensionParams ext;
  Rng rng{0};
  std::size_t released_count = 0;
};

/// Validated initial state: agents placed by init_agents, RNG seeded with
/// params.seed.
SimState init_swarm(const SimParams& params, const Arena& arena, const ExtensionParams& ext = {});

/// Releases every agent due by state.step (batches at multiples of the
/// interval, ascending id). Idempotent within a step.
void release_batch(SimState& state);

/// Executes one synchronous round and advances state.step.
StepRecord step(SimState& state, int snapshot_every = 1);

struct RunOptions {
  int snapshot_every = 1;
};

EventLog run(const SimParams& params, const Arena& arena, const ExtensionParams& ext = {},
             const RunOptions& options = {});

AgentSnapshot snapshot(const Agent& agent);
StepRecord initial_record(const SimState& state);
LogHeader make_header(const SimState& state, int snapshot_every);

}  // namespace swarm
