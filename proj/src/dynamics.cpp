#include "swarm/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace swarm {

double draw_disturbance(Rng& rng, double sigma2) {
  if (sigma2 == 0.0) return 1.0;
  return rng.normal(1.0, std::sqrt(sigma2));
}

std::vector<BeaconBroadcast> collect_beacon_signals(std::span<const Agent> agents,
                                                    const Agent& forager,
                                                    const SimParams& params, Rng& rng) {
  std::vector<BeaconBroadcast> view;
  for (const Agent& b : agents) {
    if (!b.released || b.mode != AgentMode::Beacon || b.id == forager.id) continue;
    if (distance(b.pos, forager.pos) > params.delta_m) continue;
    const BeaconMemory& m = *b.beacon;
    BeaconBroadcast msg{m.w_f1, m.w_f2, m.u_f1, m.u_f2};
    msg.w_f1 *= std::abs(draw_disturbance(rng, params.sigma2));
    msg.w_f2 *= std::abs(draw_disturbance(rng, params.sigma2));
    view.push_back(msg);
  }
  return view;
}

std::vector<ForagerBroadcast> collect_forager_signals(std::span<const Agent> agents,
                                                      const Agent& beacon,
                                                      std::span<const ForagerBroadcast> broadcasts,
                                                      const SimParams& params, Rng& rng) {
  std::vector<std::size_t> in_range;
  for (const Agent& f : agents) {
    if (!f.released || !is_forager(f.mode)) continue;
    if (distance(f.pos, beacon.pos) > params.delta_m) continue;
    in_range.push_back(static_cast<std::size_t>(f.id));
  }
  const auto cap = static_cast<std::size_t>(params.max_signals);
  if (in_range.size() > cap) {
    // Partial Fisher-Yates, then restore id order for the kept subset.
    for (std::size_t i = 0; i < cap; ++i) {
      const std::size_t j = i + rng.index(in_range.size() - i);
      std::swap(in_range[i], in_range[j]);
    }
    in_range.resize(cap);
    std::sort(in_range.begin(), in_range.end());
  }
  std::vector<ForagerBroadcast> view;
  view.reserve(in_range.size());
  for (std::size_t id : in_range) {
    ForagerBroadcast msg = broadcasts[id];
    msg.velocity *= draw_disturbance(rng, params.sigma2);
    view.push_back(msg);
  }
  return view;
}

double compute_gamma(AgentMode mode, Vec2 pos, const Arena& arena, double r) {
  if (mode == AgentMode::SeekTarget && in_region(arena.nest, pos)) return r;
  if (mode == AgentMode::SeekNest && in_region(arena.target, pos)) return r;
  return 0.0;
}

double forager_reward(AgentMode mode, double gamma, std::span<const BeaconBroadcast> view,
                      double lambda) {
  double best = 0.0;
  for (const BeaconBroadcast& b : view) best = std::max(best, b.weight(mode));
  return gamma + lambda * best;
}

double beacon_update_weight(double w, std::span<const double> rewards, double rho) {
  if (rewards.empty()) return w;
  const double mean =
      std::accumulate(rewards.begin(), rewards.end(), 0.0) / static_cast<double>(rewards.size());
  return (1.0 - rho) * w + rho * mean;
}

Vec2 beacon_update_guide(Vec2 u, std::span<const Vec2> velocities, double rho) {
  if (velocities.empty()) return u;
  Vec2 sum;
  for (Vec2 v : velocities) sum += v;
  const Vec2 mean = sum * (1.0 / static_cast<double>(velocities.size()));
  return (1.0 - rho) * u - rho * mean;
}

std::optional<Vec2> guiding_vector(AgentMode mode, std::span<const BeaconBroadcast> view,
                                   double v0) {
  const AgentMode other = opposite_state(mode);
  Vec2 sum;
  for (const BeaconBroadcast& b : view) sum += b.weight(other) * b.guide(other);
  const double n = norm(sum);
  if (view.empty() || n < 1e-9) return std::nullopt;
  return sum * (v0 / n);
}

Vec2 choose_velocity(double heading, Vec2 current_velocity, const std::optional<Vec2>& guide,
                     double epsilon, double v0, bool mode_switched, Rng& rng) {
  if (mode_switched) return -current_velocity;
  if (!guide || rng.uniform() < epsilon) return from_polar(v0, heading + rng.angle());
  return *guide;
}

bool endpoint_free(const Arena& arena, std::span<const Agent> agents, int self, Vec2 endpoint,
                   const SimParams& params) {
  if (!arena.in_bounds(endpoint)) return false;
  if (clearance(arena, endpoint) - params.robot_radius_m <= params.collision_trigger_m) {
    return false;
  }
  if (params.point_mass) return true;
  const double min_center = 2.0 * params.robot_radius_m + params.collision_trigger_m;
  for (const Agent& other : agents) {
    if (other.id == self) continue;
    if (distance(other.pos, endpoint) <= min_center) return false;
  }
  return true;
}

Vec2 avoid_collisions(const Arena& arena, std::span<const Agent> agents, int self,
                      Vec2 proposed, const SimParams& params) {
  if (proposed == Vec2{}) return proposed;
  const Vec2 from = agents[static_cast<std::size_t>(self)].pos;
  constexpr double increment = std::numbers::pi / 8.0;
  for (int k = 0; k < 16; ++k) {
    // 0, +1, -1, +2, -2, ..., +7, -7, 8
    const int magnitude = (k + 1) / 2;
    const int sign = (k % 2 == 1) ? 1 : -1;
    const Vec2 candidate = k == 0 ? proposed : rotate(proposed, sign * magnitude * increment);
    if (endpoint_free(arena, agents, self, from + candidate * params.tau_s, params)) {
      return candidate;
    }
  }
  return {};
}

Vec2 integrate(const Arena& arena, Vec2 pos, Vec2 v, double tau) {
  const Vec2 next = pos + v * tau;
  return {std::clamp(next.x, 0.0, arena.width), std::clamp(next.y, 0.0, arena.height)};
}

}  // namespace swarm
