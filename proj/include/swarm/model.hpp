#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "swarm/geometry.hpp"
#include "swarm/rng.hpp"

namespace swarm {

enum class AgentMode : std::uint8_t {
  Beacon,
  SeekTarget,  // F1
  SeekNest,    // F2
};

std::string_view to_string(AgentMode mode);
/// Parses "B", "F1" or "F2".
AgentMode parse_mode(std::string_view text);

inline bool is_forager(AgentMode m) { return m != AgentMode::Beacon; }

/// F1 <-> F2. Throws "not a forager state" for Beacon.
AgentMode opposite_state(AgentMode s);

/// Per-state weights and guiding vectors held by a beacon.
struct BeaconMemory {
  double w_f1 = 0.0;
  double w_f2 = 0.0;
  Vec2 u_f1;
  Vec2 u_f2;
  std::int64_t last_update_f1 = -1;
  std::int64_t last_update_f2 = -1;
  std::int64_t beacon_since = 0;
  // Last step at which max(w_f1, w_f2) reached the staleness threshold.
  std::int64_t last_active_step = 0;

  double weight(AgentMode s) const { return s == AgentMode::SeekTarget ? w_f1 : w_f2; }
  Vec2 guide(AgentMode s) const { return s == AgentMode::SeekTarget ? u_f1 : u_f2; }
};

struct Agent {
  int id = 0;
  Vec2 pos;
  double heading = 0.0;
  AgentMode mode = AgentMode::SeekTarget;
  std::optional<BeaconMemory> beacon;
  bool released = false;
  int trips_completed = 0;
  // Velocity of the last executed move.
  Vec2 velocity;
  // Set by an F1<->F2 switch; the next move reverses `velocity`.
  bool turn_pending = false;
  // Set when a stale beacon reverts; cleared once the agent hears a beacon.
  bool reverted = false;

  void become_beacon(std::int64_t step);
};

/// Six scalars: both weights and both guiding vectors.
struct BeaconBroadcast {
  double w_f1 = 0.0;
  double w_f2 = 0.0;
  Vec2 u_f1;
  Vec2 u_f2;

  double weight(AgentMode s) const { return s == AgentMode::SeekTarget ? w_f1 : w_f2; }
  Vec2 guide(AgentMode s) const { return s == AgentMode::SeekTarget ? u_f1 : u_f2; }
};

struct ForagerBroadcast {
  AgentMode state = AgentMode::SeekTarget;
  double reward = 0.0;
  Vec2 velocity;
};

struct SimParams {
  double rho = 0.01;
  double lambda = 0.8;
  double reward_r = 1.0;
  double epsilon = 0.05;
  double tau_s = 1.0;
  double delta_m = 0.4;
  double v0_mps = 0.25;
  double sigma2 = 0.01;
  int max_signals = 5;
  int n_agents = 100;
  int horizon_steps = 400;
  int batch_size = 10;
  int batch_interval_steps = 5;
  double collision_trigger_m = 0.02;
  double robot_radius_m = 0.02;
  std::uint64_t seed = 1;
  // Robots have no body: robot-robot avoidance is skipped. Walls and
  // obstacles are still avoided.
  bool point_mass = false;

  double step_length() const { return v0_mps * tau_s; }
  /// r / (1 - lambda), the σ = 0 upper bound of every stored weight.
  double weight_bound() const { return reward_r / (1.0 - lambda); }
};

/// Throws swarm::Error for out-of-range fields; returns one warning per
/// violated step-size or goal-size condition.
std::vector<std::string> validate_params(const SimParams& params, const Arena& arena);

/// Next state: B with no beacon in range (this clause wins), else F1 -> F2
/// inside the target and F2 -> F1 inside the nest, else unchanged.
AgentMode transition_mode(const Agent& agent, bool beacon_in_range, const Arena& arena);

/// Places all agents in the nest. Agent 0 is the only beacon and sits at
/// the nest center; the first batch is released.
std::vector<Agent> init_agents(const SimParams& params, const Arena& arena, Rng& rng);

}  // namespace swarm
