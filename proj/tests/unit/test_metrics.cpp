#include <doctest.h>

#include <cmath>

#include "oracles/oracles.hpp"
#include "swarm/engine.hpp"
#include "swarm/error.hpp"
#include "swarm/metrics.hpp"

using namespace swarm;

namespace {

constexpr auto F1 = AgentMode::SeekTarget;
constexpr auto F2 = AgentMode::SeekNest;
constexpr auto B = AgentMode::Beacon;

// Hand-built log: n agents, steps 0..horizon, snapshots only at 0 and the
// end, trips given as (agent, step) pairs.
EventLog trip_log(int n, int horizon, const std::vector<std::pair<int, int>>& trips,
                  const std::vector<AgentMode>& final_modes = {}) {
  EventLog log;
  log.header.params.n_agents = n;
  log.header.params.horizon_steps = horizon;
  for (int k = 0; k <= horizon; ++k) {
    StepRecord r;
    r.step = k;
    if (k == 0 || k == horizon) {
      for (int i = 0; i < n; ++i) {
        AgentSnapshot a;
        a.id = i;
        a.released = true;
        a.mode = k == horizon && !final_modes.empty() ? final_modes[static_cast<std::size_t>(i)] : F1;
        r.agents.push_back(a);
      }
    }
    for (const auto& [id, at] : trips)
      if (at == k) r.transitions.push_back({id, F2, F1});
    log.records.push_back(std::move(r));
  }
  return log;
}

std::vector<Vec2> random_points(Rng& rng, std::size_t n, double span = 2.0) {
  std::vector<Vec2> pts(n);
  for (Vec2& p : pts) p = {rng.uniform(0, span), rng.uniform(0, span)};
  return pts;
}

}  // namespace

TEST_CASE("count_trips counts F2 to F1 inside the window") {
  EventLog log = trip_log(3, 100, {{0, 10}, {0, 40}, {1, 50}, {2, 99}, {2, 100}});
  log.records[20].transitions.push_back({1, F1, F2});
  log.records[30].transitions.push_back({2, F2, B});
  CHECK(count_trips(log, {0, 100}) == std::vector<int>{2, 1, 1});
  CHECK(count_trips(log, {40, 101}) == std::vector<int>{1, 1, 2});
  CHECK(count_trips(log, {11, 40}) == std::vector<int>{0, 0, 0});
  CHECK_THROWS_WITH_AS(count_trips(log, {5, 5}), "empty window", Error);

  EventLog four = trip_log(4, 100, {{3, 90}});
  four.records[50].transitions.push_back({3, F1, F2});
  CHECK(count_trips(four, {0, 100}) == std::vector<int>{0, 0, 0, 1});
}

TEST_CASE("navigation_delay") {
  SUBCASE("mean of window over trips") {
    // 300 s window, trips 4 and 4 and 12 -> (75 + 75 + 25) / 3
    std::vector<std::pair<int, int>> trips;
    for (int t = 0; t < 4; ++t) trips.push_back({0, 10 + t}), trips.push_back({1, 20 + t});
    for (int t = 0; t < 12; ++t) trips.push_back({2, 30 + t});
    const auto r = navigation_delay(trip_log(3, 300, trips), {0, 300}, Population::All);
    CHECK(r.delay_s == doctest::Approx(175.0 / 3));
    CHECK(r.censored_fraction == 0.0);
    CHECK(r.population == 3);
    const auto two = navigation_delay(trip_log(2, 100, {{0, 10}, {0, 60}, {1, 30}}), {0, 100}, Population::All);
    CHECK(two.delay_s == doctest::Approx(75.0));
  }
  SUBCASE("all censored") {
    const auto r = navigation_delay(trip_log(4, 100, {}), {0, 100}, Population::All);
    CHECK(r.delay_s == doctest::Approx(100.0));
    CHECK(r.censored_fraction == 1.0);
  }
  SUBCASE("foragers only drops end-of-window beacons") {
    const EventLog log = trip_log(3, 100, {{1, 5}, {1, 6}}, {B, F1, F2});
    const auto all = navigation_delay(log, {0, 100}, Population::All);
    const auto foragers = navigation_delay(log, {0, 100}, Population::ForagersOnly);
    CHECK(all.population == 3);
    CHECK(foragers.population == 2);
    CHECK(foragers.delay_s == doctest::Approx((50.0 + 100.0) / 2));
    CHECK(foragers.censored_fraction == doctest::Approx(0.5));
  }
  SUBCASE("empty population") {
    const std::vector<int> counts{1, 2};
    CHECK_THROWS_WITH_AS(navigation_delay(counts, {0, 10}, {false, false}), "empty population", Error);
  }
}

TEST_CASE("navigation_delay never increases with more trips") {
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    std::vector<int> counts(10);
    for (int& c : counts) c = static_cast<int>(rng.index(6));
    const std::vector<bool> all(10, true);
    const double before = navigation_delay(counts, {0, 100}, all).delay_s;
    ++counts[rng.index(10)];
    CHECK(navigation_delay(counts, {0, 100}, all).delay_s <= before);
  }
}

TEST_CASE("forager_delay is absent when only beacons remain") {
  const EventLog log = trip_log(2, 50, {{0, 10}}, {B, B});
  CHECK_FALSE(forager_delay(log, {0, 50}));
  CHECK_THROWS_WITH_AS(navigation_delay(log, {0, 50}, Population::ForagersOnly), "empty population", Error);
  CHECK(navigation_delay(log, {0, 50}, Population::All).delay_s == doctest::Approx(50.0));
}

TEST_CASE("detect_t_conv") {
  CHECK(detect_t_conv(trip_log(2, 200, {{1, 120}, {0, 142}})) == 120.0);
  CHECK(detect_t_conv(trip_log(2, 200, {{1, 120}, {0, 120}})) == 120.0);
  CHECK_FALSE(detect_t_conv(trip_log(2, 50, {})));
}

TEST_CASE("single_linkage examples") {
  const std::vector<Vec2> line{{0, 0}, {0.1, 0}, {0.6, 0}};
  const Dendrogram d = single_linkage(line);
  REQUIRE(d.merges.size() == 2);
  CHECK(d.merges[0].height == doctest::Approx(0.1));
  CHECK(d.merges[0].left_size == 1);
  CHECK(d.merges[1].height == doctest::Approx(0.5));
  CHECK(d.merges[1].left_size == 2);
  CHECK(d.merges[1].right_size == 1);

  CHECK(single_linkage(std::vector<Vec2>{{1, 1}}).merges.empty());
  const Dendrogram same = single_linkage(std::vector<Vec2>(4, Vec2{1, 1}));
  REQUIRE(same.merges.size() == 3);
  for (const Merge& m : same.merges) CHECK(m.height == 0.0);
  CHECK(hierarchic_entropy(same) == 0.0);
}

TEST_CASE("single_linkage matches the brute-force agglomeration") {
  Rng rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const auto pts = random_points(rng, 2 + rng.index(25));
    const Dendrogram d = single_linkage(pts);
    const auto ref = oracle::brute_single_linkage(pts);
    REQUIRE(d.merges.size() == ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) {
      CHECK(d.merges[i].height == doctest::Approx(ref[i].height).epsilon(1e-12));
      CHECK(d.merges[i].left_size == ref[i].left_size);
      CHECK(d.merges[i].right_size == ref[i].right_size);
    }
    const double h = rng.uniform(0, 1);
    auto sizes = cluster_sizes_at(d, h);
    auto expect = oracle::brute_cluster_sizes(pts, h);
    std::sort(sizes.begin(), sizes.end());
    std::sort(expect.begin(), expect.end());
    CHECK(sizes == expect);
  }
}

TEST_CASE("social_entropy") {
  const std::vector<std::size_t> halves{2, 2}, whole{4}, split{2, 1};
  CHECK(social_entropy(halves, 4) == 1.0);
  CHECK(social_entropy(whole, 4) == 0.0);
  CHECK(social_entropy(split, 3) == doctest::Approx(0.9183).epsilon(1e-4));
}

TEST_CASE("hierarchic_entropy") {
  const std::vector<Vec2> line{{0, 0}, {0.1, 0}, {0.6, 0}};
  CHECK(hierarchic_entropy(single_linkage(line), 0.04) == doctest::Approx(0.4624).epsilon(1e-4));
  CHECK(hierarchic_entropy(single_linkage(std::vector<Vec2>{{0, 0}}), 0.04) == 0.0);
  // Merges below delta0 do not contribute.
  const std::vector<Vec2> tight{{0, 0}, {0.01, 0}};
  CHECK(hierarchic_entropy(single_linkage(tight), 0.04) == 0.0);
}

TEST_CASE("hierarchic_entropy matches numerical integration") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto pts = random_points(rng, 3 + rng.index(10), 1.0);
    const double exact = hierarchic_entropy(single_linkage(pts), 0.04);
    CHECK(exact == doctest::Approx(oracle::trapezoid_entropy(pts, 0.04, 1e-4)).epsilon(1e-3));
  }
}

TEST_CASE("hierarchic_entropy is invariant to rigid motion") {
  Rng rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const auto pts = random_points(rng, 15);
    const double angle = rng.angle();
    const Vec2 shift{rng.uniform(-5, 5), rng.uniform(-5, 5)};
    std::vector<Vec2> moved;
    for (Vec2 p : pts) moved.push_back(rotate(p, angle) + shift);
    CHECK(hierarchic_entropy(single_linkage(moved)) ==
          doctest::Approx(hierarchic_entropy(single_linkage(pts))).epsilon(1e-9));
  }
}

TEST_CASE("entropy_normalizer") {
  const Arena arena;
  Rng a(1), b(1);
  CHECK(entropy_normalizer(arena, 1, a) == 0.0);
  const double x = entropy_normalizer(arena, 30, a, 20);
  const double y = entropy_normalizer(arena, 30, b, 20);
  CHECK(x == y);
  CHECK(x > 0.0);
  // A swarm packed into the nest sits far below the uniform reference.
  Rng place(2);
  std::vector<Vec2> packed;
  for (int i = 0; i < 30; ++i) packed.push_back(sample_point_in_region(arena.nest, place, 0.04, packed));
  CHECK(hierarchic_entropy(single_linkage(packed)) / x < 0.2);
}

TEST_CASE("lower_bound_delay") {
  SimParams p;
  Arena a;
  a.nest = {{1.25, 0.5}, 0.25};
  a.target = {{1.25, 2.5}, 0.25};
  CHECK(lower_bound_delay(a, p) == doctest::Approx(12.0).epsilon(0.01));

  const Arena empty;
  Arena obstacle;
  obstacle.obstacles.push_back({Rect{{0.65, 1.35}, {1.85, 1.65}}});
  CHECK(lower_bound_delay(empty, p) == doctest::Approx(11.2).epsilon(0.01));
  CHECK(lower_bound_delay(obstacle, p) > lower_bound_delay(empty, p));

  Arena walled;
  walled.obstacles.push_back({Rect{{0.0, 1.4}, {2.5, 1.6}}});
  CHECK_THROWS_WITH_AS(lower_bound_delay(walled, p), "disconnected", Error);
}

TEST_CASE("no agent beats the lower bound") {
  SimParams p;
  p.n_agents = 40;
  p.horizon_steps = 400;
  p.seed = 4;
  const EventLog log = run(p, Arena{});
  const double bound = lower_bound_delay(Arena{}, p);
  const auto counts = count_trips(log, {0, 401});
  int any = 0;
  for (int c : counts)
    if (c > 0) {
      ++any;
      CHECK(400.0 / c >= bound);
    }
  CHECK(any > 0);
}

TEST_CASE("compute_run_metrics") {
  SimParams p;
  p.n_agents = 30;
  p.horizon_steps = 200;
  p.seed = 2;
  const EventLog log = run(p, Arena{}, {}, RunOptions{5});
  const RunMetrics m = compute_run_metrics(log, std::nullopt, 10, 10);
  CHECK(m.window.t0 == m.t_conv_s.value_or(0.0));
  CHECK(m.window.t1 == 200.0);
  CHECK(m.final_beacons >= 1);
  CHECK(m.entropy.size() == 21);
  REQUIRE(m.delay_foragers);
  CHECK(m.delay_foragers->population + m.final_beacons == 30);
  CHECK(m.delay_all.population == 30);
  CHECK(m.lower_bound_s == doctest::Approx(11.2).epsilon(0.01));
}
