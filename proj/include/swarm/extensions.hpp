#pragma once

#include <cstdint>
#include <span>

#include "swarm/model.hpp"

namespace swarm {

/// Mobile-beacon behavior: stale beacons revert to foragers and active
/// beacons drift toward the bisector of their two guiding vectors.
struct ExtensionParams {
  bool enabled = false;
  double stale_weight_threshold = 0.01;
  int stale_steps_threshold = 50;
  double kp = 0.05;  // 1/s

  /// Throws swarm::Error on out-of-range fields.
  void validate() const;
};

/// True when `beacon` is the only released beacon within delta of some
/// released forager.
bool sole_covering_beacon(std::span<const Agent> agents, const Agent& beacon, double delta);

/// ForagerSeekTarget once max(w_f1, w_f2) has stayed below the weight
/// threshold for at least the step threshold, unless the beacon is the
/// only one covering a forager.
AgentMode staleness_revert(std::span<const Agent> agents, const Agent& beacon,
                           const ExtensionParams& ext, std::int64_t current_step,
                           double delta);

/// kp * (unit(u_f1) + unit(u_f2)), magnitude clamped to v0.
Vec2 beacon_drift_velocity(const Agent& beacon, const ExtensionParams& ext, double v0);

}  // namespace swarm
