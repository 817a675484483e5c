#include "swarm/model.hpp"

#include <algorithm>

#include "swarm/error.hpp"

namespace swarm {

std::string_view to_string(AgentMode mode) {
  switch (mode) {
    case AgentMode::Beacon: return "B";
    case AgentMode::SeekTarget: return "F1";
    case AgentMode::SeekNest: return "F2";
  }
  return "?";
}

AgentMode parse_mode(std::string_view text) {
  if (text == "B") return AgentMode::Beacon;
  if (text == "F1") return AgentMode::SeekTarget;
  if (text == "F2") return AgentMode::SeekNest;
  throw Error("unknown agent mode '" + std::string(text) + "'");
}

AgentMode opposite_state(AgentMode s) {
  switch (s) {
    case AgentMode::SeekTarget: return AgentMode::SeekNest;
    case AgentMode::SeekNest: return AgentMode::SeekTarget;
    case AgentMode::Beacon: break;
  }
  throw Error("not a forager state");
}

void Agent::become_beacon(std::int64_t step) {
  mode = AgentMode::Beacon;
  BeaconMemory memory;
  memory.beacon_since = step;
  memory.last_active_step = step;
  beacon = memory;
  velocity = {};
  turn_pending = false;
  reverted = false;
}

std::vector<std::string> validate_params(const SimParams& p, const Arena& arena) {
  auto unit_interval = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) throw Error(std::string(name) + " must be in [0, 1]");
  };
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw Error(std::string(name) + " must be positive");
  };
  unit_interval(p.rho, "rho");
  unit_interval(p.lambda, "lambda");
  unit_interval(p.epsilon, "epsilon");
  positive(p.tau_s, "tau_s");
  positive(p.delta_m, "delta_m");
  positive(p.v0_mps, "v0_mps");
  if (!(p.sigma2 >= 0.0)) throw Error("sigma2 must be non-negative");
  if (!(p.reward_r >= 0.0)) throw Error("reward_r must be non-negative");
  if (p.max_signals < 1) throw Error("max_signals must be at least 1");
  if (p.n_agents < 1) throw Error("n_agents must be at least 1");
  if (p.horizon_steps < 0) throw Error("horizon_steps must be non-negative");
  if (p.batch_size < 1) throw Error("batch_size must be at least 1");
  if (p.batch_interval_steps < 1) throw Error("batch_interval_steps must be at least 1");
  if (!(p.collision_trigger_m >= 0.0)) throw Error("collision_trigger_m must be non-negative");
  if (!(p.robot_radius_m >= 0.0)) throw Error("robot_radius_m must be non-negative");

  std::vector<std::string> warnings;
  const double step = p.step_length();
  if (step >= p.delta_m / 2.0) {
    warnings.push_back("step-length: v0*tau = " + std::to_string(step) +
                       " is not below delta/2 = " + std::to_string(p.delta_m / 2.0));
  }
  const double min_goal = std::min(arena.nest.radius, arena.target.radius);
  if (min_goal < 2.0 * step) {
    warnings.push_back("goal-radius: smallest goal radius " + std::to_string(min_goal) +
                       " is below 2*v0*tau = " + std::to_string(2.0 * step));
  }
  return warnings;
}

AgentMode transition_mode(const Agent& agent, bool beacon_in_range, const Arena& arena) {
  switch (agent.mode) {
    case AgentMode::Beacon:
      return AgentMode::Beacon;
    case AgentMode::SeekTarget:
      if (!beacon_in_range) return AgentMode::Beacon;
      return in_region(arena.target, agent.pos) ? AgentMode::SeekNest : AgentMode::SeekTarget;
    case AgentMode::SeekNest:
      if (!beacon_in_range) return AgentMode::Beacon;
      return in_region(arena.nest, agent.pos) ? AgentMode::SeekTarget : AgentMode::SeekNest;
  }
  return agent.mode;
}

std::vector<Agent> init_agents(const SimParams& params, const Arena& arena, Rng& rng) {
  std::vector<Agent> agents(static_cast<std::size_t>(params.n_agents));
  std::vector<Vec2> placed;
  placed.reserve(agents.size());
  for (std::size_t i = 0; i < agents.size(); ++i) {
    Agent& a = agents[i];
    a.id = static_cast<int>(i);
    if (i == 0) {
      a.pos = arena.nest.center;
    } else {
      a.pos = sample_point_in_region(arena.nest, rng, 2.0 * params.robot_radius_m, placed);
    }
    placed.push_back(a.pos);
    a.heading = rng.heading();
    a.mode = AgentMode::SeekTarget;
    a.released = static_cast<int>(i) < params.batch_size;
  }
  agents[0].become_beacon(0);
  return agents;
}

}  // namespace swarm
