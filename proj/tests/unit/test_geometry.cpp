#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "oracles/oracles.hpp"
#include "swarm/error.hpp"
#include "swarm/geometry.hpp"
#include "swarm/rng.hpp"

using namespace swarm;

namespace {

Arena box(double w, double h) {
  Arena a;
  a.width = w;
  a.height = h;
  a.nest = {{w * 0.1, h * 0.1}, 0.05};
  a.target = {{w * 0.9, h * 0.9}, 0.05};
  return a;
}

}  // namespace

TEST_CASE("in_region is boundary inclusive") {
  const Disc d{{0, 0}, 1};
  CHECK(in_region(d, {0, 0}));
  CHECK(in_region(d, {1, 0}));
  CHECK_FALSE(in_region(d, {1.01, 0}));
}

TEST_CASE("in_region is translation invariant") {
  Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    const Disc d{{rng.uniform(-5, 5), rng.uniform(-5, 5)}, rng.uniform(0.1, 2)};
    const Vec2 p{rng.uniform(-8, 8), rng.uniform(-8, 8)};
    // Integer shifts keep the arithmetic exact.
    const Vec2 t{std::round(rng.uniform(-100, 100)), std::round(rng.uniform(-100, 100))};
    CHECK(in_region(d, p) == in_region({d.center + t, d.radius}, p + t));
  }
}

TEST_CASE("clearance") {
  Arena a = box(10, 10);
  CHECK(clearance(a, {5, 5}) == doctest::Approx(5.0));
  a.obstacles.push_back({Disc{{5, 5}, 1}});
  CHECK(clearance(a, {5, 7}) == doctest::Approx(1.0));
  CHECK(clearance(a, {5, 5.5}) == 0.0);
  CHECK_THROWS_WITH_AS(clearance(a, {11, 5}), "outside arena", Error);
}

TEST_CASE("clearance is 1-Lipschitz") {
  Arena a = box(3, 3);
  a.obstacles.push_back({Disc{{1.0, 1.0}, 0.3}});
  a.obstacles.push_back({Rect{{1.8, 0.5}, {2.4, 2.2}}});
  Rng rng(5);
  for (int i = 0; i < 2000; ++i) {
    const Vec2 p{rng.uniform(0, 3), rng.uniform(0, 3)};
    const Vec2 q{rng.uniform(0, 3), rng.uniform(0, 3)};
    CHECK(std::abs(clearance(a, p) - clearance(a, q)) <= distance(p, q) + 1e-12);
  }
}

TEST_CASE("shortest_path_length in free space is Euclidean within 2%") {
  const Arena a = box(10, 10);
  // A (3,4) displacement between interior points.
  CHECK(shortest_path_length(a, 0.02, {1, 1}, {4, 5}) == doctest::Approx(5.0).epsilon(0.02));
  CHECK(shortest_path_length(a, 0.02, {1, 1}, {4, 5}) >= 5.0);
}

TEST_CASE("shortest_path_length detour matches the fine-grid oracle") {
  Arena a = box(2, 2);
  a.obstacles.push_back({Rect{{0.3, 0.9}, {1.6, 1.1}}});
  const Vec2 p{1.0, 0.4}, q{1.0, 1.6};
  const double got = shortest_path_length(a, 0.02, p, q);
  const double ref = oracle::fine_grid_path(a, 0.02, p, q);
  REQUIRE(ref > 0);
  CHECK(std::abs(got - ref) / ref < 0.02);
  // Around the near end at (1.6, 1.0) inflated by the radius.
  const double corner = std::hypot(0.62, 0.48) * 2 + 0.24;
  CHECK(got == doctest::Approx(corner).epsilon(0.02));
}

TEST_CASE("shortest_path_length errors") {
  Arena a = box(2, 2);
  a.obstacles.push_back({Disc{{1.5, 1.5}, 0.2}});
  CHECK_THROWS_WITH_AS(shortest_path_length(a, 0.02, {0.5, 0.5}, {1.5, 1.5}), "blocked endpoint", Error);
  CHECK_THROWS_WITH_AS(shortest_path_length(a, 0.02, {0.005, 0.5}, {1.0, 0.5}), "blocked endpoint", Error);
  Arena walled = box(2, 2);
  walled.obstacles.push_back({Rect{{0.0, 0.95}, {2.0, 1.05}}});
  CHECK_THROWS_WITH_AS(shortest_path_length(walled, 0.02, {1, 0.5}, {1, 1.5}), "disconnected", Error);
}

TEST_CASE("shortest_path_length symmetry and Euclidean lower bound") {
  Arena a = box(2, 2);
  a.obstacles.push_back({Disc{{1.0, 1.0}, 0.35}});
  a.obstacles.push_back({Rect{{0.2, 1.5}, {0.9, 1.6}}});
  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    Vec2 p, q;
    do p = {rng.uniform(0, 2), rng.uniform(0, 2)}; while (clearance(a, p) <= 0.03);
    do q = {rng.uniform(0, 2), rng.uniform(0, 2)}; while (clearance(a, q) <= 0.03);
    const double pq = shortest_path_length(a, 0.02, p, q);
    const double qp = shortest_path_length(a, 0.02, q, p);
    CHECK(std::abs(pq - qp) <= 0.01 * std::sqrt(2.0));
    CHECK(pq >= distance(p, q));
  }
}

TEST_CASE("sample_point_in_region is uniform over the disc") {
  Rng rng(2024);
  const Disc d{{1, 2}, 0.5};
  // 4 equal-area rings x 4 sectors.
  std::vector<std::size_t> counts(16, 0);
  for (int i = 0; i < 10000; ++i) {
    const Vec2 p = sample_point_in_region(d, rng, 0.0, {});
    REQUIRE(in_region(d, p));
    const Vec2 r = p - d.center;
    const double frac = dot(r, r) / (d.radius * d.radius);
    const int ring = std::min(3, static_cast<int>(frac * 4));
    const double ang = std::atan2(r.y, r.x) + std::numbers::pi;
    const int sector = std::min(3, static_cast<int>(ang / (std::numbers::pi / 2)));
    ++counts[static_cast<std::size_t>(ring * 4 + sector)];
  }
  CHECK(oracle::chi_square_uniform(counts) < oracle::chi_square_critical_001(15));
}

TEST_CASE("sample_point_in_region separation and overcrowding") {
  Rng rng(1);
  std::vector<Vec2> pts;
  for (int i = 0; i < 200; ++i) pts.push_back(sample_point_in_region({{0, 0}, 0.01}, rng, 0.0, pts));
  CHECK(pts.size() == 200);

  std::vector<Vec2> placed;
  for (int i = 0; i < 20; ++i) placed.push_back(sample_point_in_region({{0, 0}, 0.3}, rng, 0.04, placed));
  for (std::size_t i = 0; i < placed.size(); ++i)
    for (std::size_t j = i + 1; j < placed.size(); ++j) CHECK(distance(placed[i], placed[j]) >= 0.04);

  const std::vector<Vec2> center{{0, 0}};
  CHECK_THROWS_WITH_AS(sample_point_in_region({{0, 0}, 0.03}, rng, 0.04, center), "region overcrowded", Error);

  // 100 existing points on a 1 cm lattice cover a 5 cm disc.
  std::vector<Vec2> lattice;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) lattice.push_back({-0.045 + 0.01 * i, -0.045 + 0.01 * j});
  CHECK_THROWS_WITH_AS(sample_point_in_region({{0, 0}, 0.05}, rng, 0.04, lattice), "region overcrowded", Error);
}

TEST_CASE("arena validation") {
  Arena a;
  CHECK_NOTHROW(a.validate());
  Arena overlap = a;
  overlap.target = {{1.25, 0.7}, 0.3};
  CHECK_THROWS_AS(overlap.validate(), Error);
  Arena outside = a;
  outside.obstacles.push_back({Rect{{2.0, 1.0}, {3.0, 1.2}}});
  CHECK_THROWS_AS(outside.validate(), Error);
  Arena covered = a;
  covered.obstacles.push_back({Disc{{1.25, 2.5}, 0.1}});
  CHECK_THROWS_AS(covered.validate(), Error);
  Arena degenerate = a;
  degenerate.obstacles.push_back({Rect{{1.0, 1.0}, {1.0, 1.5}}});
  CHECK_THROWS_AS(degenerate.validate(), Error);
}

TEST_CASE("wrap_angle") {
  CHECK(wrap_angle(std::numbers::pi) == doctest::Approx(-std::numbers::pi));
  CHECK(wrap_angle(3 * std::numbers::pi / 2) == doctest::Approx(-std::numbers::pi / 2));
  CHECK(wrap_angle(0.5) == doctest::Approx(0.5));
}
