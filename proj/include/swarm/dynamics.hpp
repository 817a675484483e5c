#pragma once

#include <optional>
#include <span>
#include <vector>

#include "swarm/geometry.hpp"
#include "swarm/model.hpp"
#include "swarm/rng.hpp"

namespace swarm {

/// Multiplicative disturbance mu ~ Normal(1, sigma2). Returns exactly 1
/// without consuming randomness when sigma2 == 0.
double draw_disturbance(Rng& rng, double sigma2);

/// Beacon signals heard by a forager: every released beacon within delta,
/// in ascending id order, each weight scaled by |mu| with its own draw.
/// Guiding vectors are passed through unchanged.
std::vector<BeaconBroadcast> collect_beacon_signals(std::span<const Agent> agents,
                                                    const Agent& forager,
                                                    const SimParams& params, Rng& rng);

/// Forager signals processed by a beacon. `broadcasts` is indexed by agent
/// id and only consulted for released foragers within delta. When more
/// than max_signals are in range a uniform random subset is kept. Each
/// kept velocity is scaled by one mu draw on both components.
std::vector<ForagerBroadcast> collect_forager_signals(std::span<const Agent> agents,
                                                      const Agent& beacon,
                                                      std::span<const ForagerBroadcast> broadcasts,
                                                      const SimParams& params, Rng& rng);

/// Goal reward: r for F1 inside the nest or F2 inside the target, else 0.
double compute_gamma(AgentMode mode, Vec2 pos, const Arena& arena, double r);

/// gamma + lambda * max of the received weights for the forager's own
/// state; the max over no beacons is 0.
double forager_reward(AgentMode mode, double gamma, std::span<const BeaconBroadcast> view,
                      double lambda);

double beacon_update_weight(double w, std::span<const double> rewards, double rho);

/// (1 - rho) u - rho * mean(velocities); unchanged when no velocities.
Vec2 beacon_update_guide(Vec2 u, std::span<const Vec2> velocities, double rho);

/// v0 times the normalized weight-sum of the opposite state's guiding
/// vectors. Empty when nothing was heard or the sum nearly cancels.
std::optional<Vec2> guiding_vector(AgentMode mode, std::span<const BeaconBroadcast> view,
                                   double v0);

/// Forager velocity choice. A mode switch reverses `current_velocity`;
/// otherwise a random heading offset is taken with probability epsilon
/// (always when there is no guide), else the guide.
Vec2 choose_velocity(double heading, Vec2 current_velocity, const std::optional<Vec2>& guide,
                     double epsilon, double v0, bool mode_switched, Rng& rng);

/// True when an agent at `endpoint` keeps every gap above the trigger.
bool endpoint_free(const Arena& arena, std::span<const Agent> agents, int self, Vec2 endpoint,
                   const SimParams& params);

/// Rotate-and-retry collision avoidance over the 16 headings spaced pi/8
/// apart, nearest rotation first. Returns zero when all are blocked.
Vec2 avoid_collisions(const Arena& arena, std::span<const Agent> agents, int self,
                      Vec2 proposed, const SimParams& params);

/// pos + v * tau clamped to the arena bounds.
Vec2 integrate(const Arena& arena, Vec2 pos, Vec2 v, double tau);

}  // namespace swarm
