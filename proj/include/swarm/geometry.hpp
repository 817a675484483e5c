#pragma once

#include <cmath>
#include <span>
#include <variant>
#include <vector>

#include "swarm/rng.hpp"

namespace swarm {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
  constexpr Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
  constexpr Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {a.x * s, a.y * s}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }
constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline Vec2 from_polar(double length, double angle) {
  return {length * std::cos(angle), length * std::sin(angle)};
}
inline Vec2 rotate(Vec2 v, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}
/// Unit vector, or zero for vectors with norm below 1e-9.
inline Vec2 unit_or_zero(Vec2 v) {
  const double n = norm(v);
  return n < 1e-9 ? Vec2{} : v * (1.0 / n);
}
/// Wraps an angle to [-pi, pi).
double wrap_angle(double a);

struct Disc {
  Vec2 center;
  double radius = 0.0;
};

struct Rect {
  Vec2 min;
  Vec2 max;
};

struct Obstacle {
  std::variant<Disc, Rect> shape;
};

/// Distance from p to the obstacle, 0 when p is inside it.
double obstacle_distance(const Obstacle& obstacle, Vec2 p);

struct Arena {
  double width = 2.5;
  double height = 3.0;
  std::vector<Obstacle> obstacles;
  Disc nest{{1.25, 0.5}, 0.3};
  Disc target{{1.25, 2.5}, 0.3};

  bool in_bounds(Vec2 p) const {
    return p.x >= 0.0 && p.y >= 0.0 && p.x <= width && p.y <= height;
  }
  /// Throws swarm::Error describing the first violated arena invariant.
  void validate() const;
};

/// Boundary-inclusive disc membership.
inline bool in_region(const Disc& region, Vec2 p) {
  return distance(p, region.center) <= region.radius;
}

/// Distance to the nearest obstacle or wall; 0 inside an obstacle.
/// Throws "outside arena" when p is out of bounds.
double clearance(const Arena& arena, Vec2 p);

/// True when the segment a-b keeps a distance strictly greater than
/// `inflate` from every obstacle and wall.
bool segment_clear(const Arena& arena, double inflate, Vec2 a, Vec2 b);

/// Length of the shortest collision-free path for a disc robot.
///
/// Dijkstra on an 8-connected grid (diagonal cost sqrt(2) cell) over cells
/// whose centers keep more than `robot_radius` from obstacles and walls,
/// followed by line-of-sight shortening of the grid path. The result is
/// never below the Euclidean distance.
/// Throws "blocked endpoint" or "disconnected".
double shortest_path_length(const Arena& arena, double robot_radius, Vec2 p, Vec2 q,
                            double cell = 0.01);

/// Rejection-samples a uniform point in `region` at least `min_separation`
/// from every point in `existing`. Throws "region overcrowded" after
/// `max_attempts` failed draws.
Vec2 sample_point_in_region(const Disc& region, Rng& rng, double min_separation,
                            std::span<const Vec2> existing, int max_attempts = 1000);

}  // namespace swarm
