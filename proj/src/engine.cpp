#include "swarm/engine.hpp"

#include <algorithm>
#include <cmath>

#include "swarm/dynamics.hpp"
#include "swarm/error.hpp"

namespace swarm {

namespace {

bool covered(std::span<const Agent> agents, const Agent& a, double delta) {
  return std::any_of(agents.begin(), agents.end(), [&](const Agent& b) {
    return b.id != a.id && b.released && b.mode == AgentMode::Beacon &&
           distance(b.pos, a.pos) <= delta;
  });
}

void move_agent(SimState& s, Agent& a, Vec2 proposed) {
  const Vec2 v = avoid_collisions(s.arena, s.agents, a.id, proposed, s.params);
  a.pos = integrate(s.arena, a.pos, v, s.params.tau_s);
  a.velocity = v;
  if (v != Vec2{}) a.heading = wrap_angle(std::atan2(v.y, v.x));
}

}  // namespace

const StepRecord* EventLog::snapshot_at_or_before(std::int64_t step) const {
  for (auto it = records.rbegin(); it != records.rend(); ++it) {
    if (it->step <= step && it->has_snapshot()) return &*it;
  }
  return nullptr;
}

const StepRecord& EventLog::final_snapshot() const {
  const StepRecord* r = records.empty() ? nullptr : snapshot_at_or_before(records.back().step);
  if (r == nullptr) throw Error("no records");
  return *r;
}

AgentSnapshot snapshot(const Agent& a) {
  AgentSnapshot s{a.id, a.pos, a.heading, a.mode, a.released, std::nullopt};
  if (a.beacon) s.memory = BeaconBroadcast{a.beacon->w_f1, a.beacon->w_f2, a.beacon->u_f1, a.beacon->u_f2};
  return s;
}

SimState init_swarm(const SimParams& params, const Arena& arena, const ExtensionParams& ext) {
  arena.validate();
  validate_params(params, arena);
  if (ext.enabled) ext.validate();
  SimState s;
  s.params = params;
  s.arena = arena;
  s.ext = ext;
  s.rng = Rng(params.seed);
  s.agents = init_agents(params, arena, s.rng);
  s.released_count = static_cast<std::size_t>(std::min(params.batch_size, params.n_agents));
  return s;
}

void release_batch(SimState& s) {
  if (s.step % s.params.batch_interval_steps != 0) return;
  const std::int64_t batches = s.step / s.params.batch_interval_steps + 1;
  const auto due = static_cast<std::size_t>(
      std::min<std::int64_t>(s.params.n_agents, batches * s.params.batch_size));
  while (s.released_count < due) s.agents[s.released_count++].released = true;
}

StepRecord initial_record(const SimState& s) {
  StepRecord r;
  r.step = s.step;
  for (const Agent& a : s.agents) r.agents.push_back(snapshot(a));
  return r;
}

LogHeader make_header(const SimState& s, int snapshot_every) {
  LogHeader h;
  h.rng_algorithm = std::string(Rng::kAlgorithm);
  h.code_version = SWARM_VERSION;
  h.params = s.params;
  h.arena = s.arena;
  h.extensions = s.ext;
  h.snapshot_every = snapshot_every;
  return h;
}

StepRecord step(SimState& s, int snapshot_every) {
  const SimParams& p = s.params;
  const std::int64_t k = s.step;
  const std::size_t n = s.agents.size();
  StepRecord record;
  record.step = k + 1;

  // (1) batch release
  release_batch(s);

  // (2) foragers listen to beacons
  std::vector<std::vector<BeaconBroadcast>> views(n);
  for (Agent& f : s.agents) {
    if (!f.released || !is_forager(f.mode)) continue;
    views[f.id] = collect_beacon_signals(s.agents, f, p, s.rng);
    if (!views[f.id].empty()) f.reverted = false;
  }

  // (3) rewards, guides and forager broadcasts
  std::vector<ForagerBroadcast> broadcasts(n);
  std::vector<std::optional<Vec2>> guides(n);
  for (const Agent& f : s.agents) {
    if (!f.released || !is_forager(f.mode)) continue;
    const double gamma = compute_gamma(f.mode, f.pos, s.arena, p.reward_r);
    const double reward = forager_reward(f.mode, gamma, views[f.id], p.lambda);
    guides[f.id] = guiding_vector(f.mode, views[f.id], p.v0_mps);
    broadcasts[f.id] = {f.mode, reward, f.turn_pending ? -f.velocity : f.velocity};
  }

  // (4) beacons listen and update
  for (Agent& b : s.agents) {
    if (!b.released || b.mode != AgentMode::Beacon) continue;
    const auto heard = collect_forager_signals(s.agents, b, broadcasts, p, s.rng);
    BeaconMemory& m = *b.beacon;
    for (AgentMode state : {AgentMode::SeekTarget, AgentMode::SeekNest}) {
      std::vector<double> rewards;
      std::vector<Vec2> velocities;
      for (const ForagerBroadcast& msg : heard) {
        if (msg.state != state) continue;
        rewards.push_back(msg.reward);
        velocities.push_back(msg.velocity);
      }
      if (rewards.empty()) continue;
      if (state == AgentMode::SeekTarget) {
        m.w_f1 = beacon_update_weight(m.w_f1, rewards, p.rho);
        m.u_f1 = beacon_update_guide(m.u_f1, velocities, p.rho);
        m.last_update_f1 = k + 1;
      } else {
        m.w_f2 = beacon_update_weight(m.w_f2, rewards, p.rho);
        m.u_f2 = beacon_update_guide(m.u_f2, velocities, p.rho);
        m.last_update_f2 = k + 1;
      }
    }
    if (s.ext.enabled && std::max(m.w_f1, m.w_f2) >= s.ext.stale_weight_threshold) {
      m.last_active_step = k + 1;
    }
  }

  // (5) movement
  for (Agent& a : s.agents) {
    if (!a.released) continue;
    if (is_forager(a.mode)) {
      const Vec2 proposed = choose_velocity(a.heading, a.velocity, guides[a.id], p.epsilon,
                                            p.v0_mps, a.turn_pending, s.rng);
      a.turn_pending = false;
      move_agent(s, a, proposed);
    } else if (s.ext.enabled) {
      const Vec2 drift = beacon_drift_velocity(a, s.ext, p.v0_mps);
      if (drift != Vec2{}) {
        move_agent(s, a, drift);
        if (a.velocity != Vec2{}) record.drift.push_back({a.id, a.velocity});
        a.velocity = {};
      }
    }
  }

  // (6) mode transitions on post-move positions
  for (Agent& a : s.agents) {
    if (!a.released || !is_forager(a.mode)) continue;
    const bool in_range = a.reverted || covered(s.agents, a, p.delta_m);
    const AgentMode next = transition_mode(a, in_range, s.arena);
    if (next == a.mode) continue;
    record.transitions.push_back({a.id, a.mode, next});
    if (next == AgentMode::Beacon) {
      a.become_beacon(k + 1);
      continue;
    }
    if (a.mode == AgentMode::SeekNest) ++a.trips_completed;
    a.mode = next;
    a.turn_pending = true;
  }
  if (s.ext.enabled) {
    for (Agent& b : s.agents) {
      if (!b.released || b.mode != AgentMode::Beacon) continue;
      if (staleness_revert(s.agents, b, s.ext, k + 1, p.delta_m) == AgentMode::Beacon) continue;
      record.transitions.push_back({b.id, AgentMode::Beacon, AgentMode::SeekTarget});
      b.mode = AgentMode::SeekTarget;
      b.beacon.reset();
      b.velocity = {};
      b.turn_pending = false;
      b.reverted = true;
    }
  }

  // Coverage check: every released forager hears at least one beacon.
  for (const Agent& a : s.agents) {
    if (!a.released || !is_forager(a.mode) || covered(s.agents, a, p.delta_m)) continue;
    if (!s.ext.enabled) {
      throw Error("invariant violated: forager " + std::to_string(a.id) +
                  " has no beacon in range after step " + std::to_string(k));
    }
    ++record.coverage_gaps;
  }

  // (7) record
  s.step = k + 1;
  if (s.step % snapshot_every == 0 || s.step >= p.horizon_steps) {
    record.agents.reserve(n);
    for (const Agent& a : s.agents) record.agents.push_back(snapshot(a));
  }
  return record;
}

EventLog run(const SimParams& params, const Arena& arena, const ExtensionParams& ext,
             const RunOptions& options) {
  if (options.snapshot_every < 1) throw Error("snapshot cadence must be at least 1");
  SimState s = init_swarm(params, arena, ext);
  EventLog log;
  log.header = make_header(s, options.snapshot_every);
  log.records.reserve(static_cast<std::size_t>(params.horizon_steps) + 1);
  log.records.push_back(initial_record(s));
  while (s.step < params.horizon_steps) log.records.push_back(step(s, options.snapshot_every));
  return log;
}

}  // namespace swarm
