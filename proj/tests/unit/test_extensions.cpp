#include <doctest.h>

#include <cmath>

#include "swarm/engine.hpp"
#include "swarm/error.hpp"
#include "swarm/event_log.hpp"
#include "swarm/extensions.hpp"

using namespace swarm;

namespace {

Agent beacon(int id, Vec2 pos, double w = 0.0, std::int64_t last_active = 0) {
  Agent b;
  b.id = id;
  b.pos = pos;
  b.released = true;
  b.become_beacon(0);
  b.beacon->w_f1 = w;
  b.beacon->last_active_step = last_active;
  return b;
}

Agent forager(int id, Vec2 pos) {
  Agent f;
  f.id = id;
  f.pos = pos;
  f.released = true;
  return f;
}

Agent guided(Vec2 u1, Vec2 u2) {
  Agent b = beacon(0, {1, 1});
  b.beacon->u_f1 = u1;
  b.beacon->u_f2 = u2;
  return b;
}

}  // namespace

TEST_CASE("staleness_revert") {
  const ExtensionParams ext{true, 0.01, 50, 0.05};
  SUBCASE("stale long enough reverts") {
    std::vector<Agent> agents{beacon(0, {1, 1}, 0.005, 10)};
    CHECK(staleness_revert(agents, agents[0], ext, 60, 0.4) == AgentMode::SeekTarget);
    CHECK(staleness_revert(agents, agents[0], ext, 59, 0.4) == AgentMode::Beacon);
  }
  SUBCASE("weight at the threshold keeps the beacon") {
    std::vector<Agent> agents{beacon(0, {1, 1}, 0.01, 0)};
    CHECK(staleness_revert(agents, agents[0], ext, 500, 0.4) == AgentMode::Beacon);
  }
  SUBCASE("the sole covering beacon stays") {
    std::vector<Agent> agents{beacon(0, {1, 1}), forager(1, {1.3, 1})};
    CHECK(sole_covering_beacon(agents, agents[0], 0.4));
    CHECK(staleness_revert(agents, agents[0], ext, 500, 0.4) == AgentMode::Beacon);
    agents.push_back(beacon(2, {1.5, 1}, 1.0));
    CHECK_FALSE(sole_covering_beacon(agents, agents[0], 0.4));
    CHECK(staleness_revert(agents, agents[0], ext, 500, 0.4) == AgentMode::SeekTarget);
  }
}

TEST_CASE("beacon_drift_velocity") {
  const ExtensionParams ext{true, 0.01, 50, 0.05};
  CHECK(distance(beacon_drift_velocity(guided({2, 0}, {0, 0.5}), ext, 0.25), {0.05, 0.05}) < 1e-12);
  CHECK(beacon_drift_velocity(guided({1, 0}, {-1, 0}), ext, 0.25) == Vec2{});
  CHECK(beacon_drift_velocity(guided({}, {}), ext, 0.25) == Vec2{});
  CHECK(distance(beacon_drift_velocity(guided({0, 3}, {}), ext, 0.25), {0, 0.05}) < 1e-12);
  const ExtensionParams fast{true, 0.01, 50, 1.0};
  CHECK(norm(beacon_drift_velocity(guided({1, 0}, {1, 0}), fast, 0.25)) == doctest::Approx(0.25));
}

TEST_CASE("beacon_drift_velocity is rotation equivariant") {
  const ExtensionParams ext{true, 0.01, 50, 0.05};
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const Vec2 u1{rng.uniform(-1, 1), rng.uniform(-1, 1)}, u2{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const double a = rng.angle();
    const Vec2 lhs = beacon_drift_velocity(guided(rotate(u1, a), rotate(u2, a)), ext, 0.25);
    const Vec2 rhs = rotate(beacon_drift_velocity(guided(u1, u2), ext, 0.25), a);
    CHECK(distance(lhs, rhs) < 1e-12);
  }
}

TEST_CASE("extension parameters are validated") {
  CHECK_THROWS_AS((ExtensionParams{true, -1, 50, 0.05}.validate()), Error);
  CHECK_THROWS_AS((ExtensionParams{true, 0.01, 0, 0.05}.validate()), Error);
  CHECK_THROWS_AS((ExtensionParams{true, 0.01, 50, -0.1}.validate()), Error);
}

TEST_CASE("a disabled extension leaves the run untouched") {
  SimParams p;
  p.n_agents = 40;
  p.horizon_steps = 150;
  p.seed = 11;
  const ExtensionParams off{false, 5.0, 1, 3.0};
  CHECK(to_jsonl(run(p, Arena{})) == to_jsonl(run(p, Arena{}, off)));
}

TEST_CASE("a reverted beacon can become a beacon again") {
  SimParams p;
  p.n_agents = 2;
  p.batch_size = 2;
  p.epsilon = 1.0;
  p.sigma2 = 0.0;
  p.horizon_steps = 300;
  const ExtensionParams ext{true, 0.01, 1, 0.0};
  SimState s = init_swarm(p, Arena{}, ext);
  s.agents[0] = beacon(0, {1.25, 1.5}, 1.0);
  s.agents[1] = beacon(1, {1.6, 1.5}, 0.0);

  const StepRecord first = step(s);
  REQUIRE(first.transitions.size() == 1);
  CHECK(first.transitions[0].id == 1);
  CHECK(first.transitions[0].from == AgentMode::Beacon);
  CHECK(s.agents[1].reverted);
  CHECK(s.agents[0].mode == AgentMode::Beacon);

  bool again = false;
  while (s.step < p.horizon_steps && !again) {
    for (const auto& t : step(s).transitions) again |= t.id == 1 && t.to == AgentMode::Beacon;
  }
  CHECK(again);
}
