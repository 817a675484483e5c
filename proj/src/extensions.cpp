#include "swarm/extensions.hpp"

#include <algorithm>

#include "swarm/error.hpp"

namespace swarm {

void ExtensionParams::validate() const {
  if (!(stale_weight_threshold >= 0.0)) throw Error("stale_weight_threshold must be non-negative");
  if (stale_steps_threshold < 1) throw Error("stale_steps_threshold must be at least 1");
  if (!(kp >= 0.0)) throw Error("kp must be non-negative");
}

bool sole_covering_beacon(std::span<const Agent> agents, const Agent& beacon, double delta) {
  for (const Agent& f : agents) {
    if (!f.released || !is_forager(f.mode)) continue;
    if (distance(f.pos, beacon.pos) > delta) continue;
    const bool other = std::any_of(agents.begin(), agents.end(), [&](const Agent& b) {
      return b.id != beacon.id && b.released && b.mode == AgentMode::Beacon &&
             distance(b.pos, f.pos) <= delta;
    });
    if (!other) return true;
  }
  return false;
}

AgentMode staleness_revert(std::span<const Agent> agents, const Agent& beacon,
                           const ExtensionParams& ext, std::int64_t current_step,
                           double delta) {
  const BeaconMemory& m = *beacon.beacon;
  if (std::max(m.w_f1, m.w_f2) >= ext.stale_weight_threshold) return AgentMode::Beacon;
  if (current_step - m.last_active_step < ext.stale_steps_threshold) return AgentMode::Beacon;
  if (sole_covering_beacon(agents, beacon, delta)) return AgentMode::Beacon;
  return AgentMode::SeekTarget;
}

Vec2 beacon_drift_velocity(const Agent& beacon, const ExtensionParams& ext, double v0) {
  const BeaconMemory& m = *beacon.beacon;
  Vec2 v = ext.kp * (unit_or_zero(m.u_f1) + unit_or_zero(m.u_f2));
  const double speed = norm(v);
  if (speed > v0) v *= v0 / speed;
  // Exactly antipodal guides cancel only up to rounding.
  if (speed < 1e-12) return {};
  return v;
}

}  // namespace swarm
