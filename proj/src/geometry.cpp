#include "swarm/geometry.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numbers>
#include <queue>

#include "swarm/error.hpp"

namespace swarm {

namespace {

double point_rect_distance(Vec2 p, const Rect& r) {
  const double dx = std::max({r.min.x - p.x, 0.0, p.x - r.max.x});
  const double dy = std::max({r.min.y - p.y, 0.0, p.y - r.max.y});
  return std::hypot(dx, dy);
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return distance(p, a);
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return distance(p, a + ab * t);
}

// Liang-Barsky clip of the segment against the rectangle.
bool segment_hits_rect(Vec2 a, Vec2 b, const Rect& r) {
  double t0 = 0.0, t1 = 1.0;
  const Vec2 d = b - a;
  const double p[4] = {-d.x, d.x, -d.y, d.y};
  const double q[4] = {a.x - r.min.x, r.max.x - a.x, a.y - r.min.y, r.max.y - a.y};
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (q[i] < 0.0) return false;
    } else {
      const double t = q[i] / p[i];
      if (p[i] < 0.0) {
        t0 = std::max(t0, t);
      } else {
        t1 = std::min(t1, t);
      }
      if (t0 > t1) return false;
    }
  }
  return true;
}

double segment_rect_distance(Vec2 a, Vec2 b, const Rect& r) {
  if (segment_hits_rect(a, b, r)) return 0.0;
  const Vec2 corners[4] = {r.min, {r.max.x, r.min.y}, r.max, {r.min.x, r.max.y}};
  double best = std::min(point_rect_distance(a, r), point_rect_distance(b, r));
  for (const Vec2& c : corners) best = std::min(best, point_segment_distance(c, a, b));
  return best;
}

bool inside_with_margin(const Arena& arena, Vec2 p, double margin) {
  return p.x > margin && p.y > margin && p.x < arena.width - margin &&
         p.y < arena.height - margin;
}

void check_disc(const Disc& d, const Arena& arena, const char* name) {
  if (!(d.radius > 0.0)) throw Error(std::string(name) + " radius must be positive");
  if (d.center.x - d.radius < 0.0 || d.center.y - d.radius < 0.0 ||
      d.center.x + d.radius > arena.width || d.center.y + d.radius > arena.height) {
    throw Error(std::string(name) + " region must lie inside the arena bounds");
  }
  for (const Obstacle& o : arena.obstacles) {
    if (obstacle_distance(o, d.center) <= d.radius) {
      throw Error(std::string(name) + " region intersects an obstacle");
    }
  }
}

}  // namespace

double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double w = a - two_pi * std::floor((a + std::numbers::pi) / two_pi);
  if (w >= std::numbers::pi) w -= two_pi;
  if (w < -std::numbers::pi) w = -std::numbers::pi;
  return w;
}

double obstacle_distance(const Obstacle& obstacle, Vec2 p) {
  if (const auto* d = std::get_if<Disc>(&obstacle.shape)) {
    return std::max(0.0, distance(p, d->center) - d->radius);
  }
  return point_rect_distance(p, std::get<Rect>(obstacle.shape));
}

void Arena::validate() const {
  if (!(width > 0.0) || !(height > 0.0)) throw Error("arena bounds must be positive");
  for (const Obstacle& o : obstacles) {
    if (const auto* d = std::get_if<Disc>(&o.shape)) {
      if (!(d->radius > 0.0)) throw Error("obstacle disc radius must be positive");
      if (d->center.x - d->radius < 0.0 || d->center.y - d->radius < 0.0 ||
          d->center.x + d->radius > width || d->center.y + d->radius > height) {
        throw Error("obstacle must lie inside the arena bounds");
      }
    } else {
      const auto& r = std::get<Rect>(o.shape);
      if (!(r.max.x > r.min.x) || !(r.max.y > r.min.y)) {
        throw Error("obstacle rectangle must have positive area");
      }
      if (r.min.x < 0.0 || r.min.y < 0.0 || r.max.x > width || r.max.y > height) {
        throw Error("obstacle must lie inside the arena bounds");
      }
    }
  }
  check_disc(nest, *this, "nest");
  check_disc(target, *this, "target");
  if (distance(nest.center, target.center) <= nest.radius + target.radius) {
    throw Error("nest and target regions must be disjoint");
  }
}

double clearance(const Arena& arena, Vec2 p) {
  if (!arena.in_bounds(p)) throw Error("outside arena");
  double best = std::min({p.x, arena.width - p.x, p.y, arena.height - p.y});
  for (const Obstacle& o : arena.obstacles) best = std::min(best, obstacle_distance(o, p));
  return best;
}

bool segment_clear(const Arena& arena, double inflate, Vec2 a, Vec2 b) {
  if (!inside_with_margin(arena, a, inflate) || !inside_with_margin(arena, b, inflate)) {
    return false;
  }
  for (const Obstacle& o : arena.obstacles) {
    if (const auto* d = std::get_if<Disc>(&o.shape)) {
      if (point_segment_distance(d->center, a, b) <= d->radius + inflate) return false;
    } else if (segment_rect_distance(a, b, std::get<Rect>(o.shape)) <= inflate) {
      return false;
    }
  }
  return true;
}

double shortest_path_length(const Arena& arena, double robot_radius, Vec2 p, Vec2 q,
                            double cell) {
  for (Vec2 e : {p, q}) {
    if (!arena.in_bounds(e) || clearance(arena, e) <= robot_radius) {
      throw Error("blocked endpoint");
    }
  }
  // Search from a canonical endpoint so the length is symmetric in p, q.
  if (q.x < p.x || (q.x == p.x && q.y < p.y)) std::swap(p, q);
  const auto nx = static_cast<std::int64_t>(std::ceil(arena.width / cell));
  const auto ny = static_cast<std::int64_t>(std::ceil(arena.height / cell));
  auto center = [&](std::int64_t i, std::int64_t j) {
    return Vec2{(static_cast<double>(i) + 0.5) * cell, (static_cast<double>(j) + 0.5) * cell};
  };
  std::vector<std::uint8_t> free(static_cast<std::size_t>(nx * ny), 0);
  for (std::int64_t j = 0; j < ny; ++j) {
    for (std::int64_t i = 0; i < nx; ++i) {
      const Vec2 c = center(i, j);
      free[static_cast<std::size_t>(j * nx + i)] =
          arena.in_bounds(c) && clearance(arena, c) > robot_radius;
    }
  }
  auto is_free = [&](std::int64_t i, std::int64_t j) {
    return i >= 0 && j >= 0 && i < nx && j < ny && free[static_cast<std::size_t>(j * nx + i)];
  };

  // Endpoints attach to nearby free cells they can see directly.
  auto attach = [&](Vec2 e) {
    std::vector<std::pair<std::size_t, double>> out;
    const auto ci = static_cast<std::int64_t>(e.x / cell);
    const auto cj = static_cast<std::int64_t>(e.y / cell);
    for (std::int64_t j = cj - 2; j <= cj + 2; ++j) {
      for (std::int64_t i = ci - 2; i <= ci + 2; ++i) {
        if (is_free(i, j) && segment_clear(arena, robot_radius, e, center(i, j))) {
          out.emplace_back(static_cast<std::size_t>(j * nx + i), distance(e, center(i, j)));
        }
      }
    }
    return out;
  };
  const auto sources = attach(p);
  const auto sinks = attach(q);
  if (sources.empty() || sinks.empty()) throw Error("disconnected");

  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(free.size(), inf);
  std::vector<std::int64_t> parent(free.size(), -1);
  std::vector<double> sink_cost(free.size(), inf);
  for (const auto& [idx, d] : sinks) sink_cost[idx] = d;

  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  for (const auto& [idx, d] : sources) {
    if (d < dist[idx]) {
      dist[idx] = d;
      open.emplace(d, idx);
    }
  }
  double best = inf;
  std::int64_t best_cell = -1;
  const double diag = std::numbers::sqrt2 * cell;
  while (!open.empty()) {
    const auto [d, idx] = open.top();
    open.pop();
    if (d > dist[idx]) continue;
    if (d >= best) break;
    if (sink_cost[idx] < inf && d + sink_cost[idx] < best) {
      best = d + sink_cost[idx];
      best_cell = static_cast<std::int64_t>(idx);
    }
    const auto i = static_cast<std::int64_t>(idx) % nx;
    const auto j = static_cast<std::int64_t>(idx) / nx;
    for (int dj = -1; dj <= 1; ++dj) {
      for (int di = -1; di <= 1; ++di) {
        if (di == 0 && dj == 0) continue;
        if (!is_free(i + di, j + dj)) continue;
        // No corner cutting through blocked cells.
        if (di != 0 && dj != 0 && (!is_free(i + di, j) || !is_free(i, j + dj))) continue;
        const auto n = static_cast<std::size_t>((j + dj) * nx + (i + di));
        const double nd = d + ((di != 0 && dj != 0) ? diag : cell);
        if (nd < dist[n]) {
          dist[n] = nd;
          parent[n] = static_cast<std::int64_t>(idx);
          open.emplace(nd, n);
        }
      }
    }
  }
  if (best_cell < 0) throw Error("disconnected");

  std::vector<Vec2> path{q};
  for (std::int64_t c = best_cell; c >= 0; c = parent[static_cast<std::size_t>(c)]) {
    path.push_back(center(c % nx, c / nx));
  }
  path.push_back(p);

  auto clear = [&](Vec2 a, Vec2 b) { return segment_clear(arena, robot_radius, a, b); };

  // Shortest chain through the path's own vertices that keeps every
  // shortcut clear; consecutive vertices are always allowed.
  auto shortcut = [&](const std::vector<Vec2>& pts) {
    const std::size_t n = pts.size();
    std::vector<double> best_len(n, inf);
    std::vector<std::size_t> from(n, 0);
    best_len[0] = 0.0;
    for (std::size_t j = 1; j < n; ++j) {
      for (std::size_t i = 0; i < j; ++i) {
        const double cand = best_len[i] + distance(pts[i], pts[j]);
        if (cand < best_len[j] && (i + 1 == j || clear(pts[i], pts[j]))) {
          best_len[j] = cand;
          from[j] = i;
        }
      }
    }
    std::vector<Vec2> out{pts[n - 1]};
    for (std::size_t j = n - 1; j > 0; j = from[j]) out.push_back(pts[from[j]]);
    std::reverse(out.begin(), out.end());
    return out;
  };

  // Pull each interior vertex toward the chord of its neighbors while both
  // edges stay clear, so the polyline tightens around obstacles.
  auto tighten = [&](std::vector<Vec2> pts) {
    std::vector<Vec2> dense{pts.front()};
    for (std::size_t i = 1; i < pts.size(); ++i) {
      const auto pieces = static_cast<int>(std::ceil(distance(pts[i - 1], pts[i]) / (2.0 * cell)));
      for (int k = 1; k <= pieces; ++k) {
        dense.push_back(pts[i - 1] + (pts[i] - pts[i - 1]) * (static_cast<double>(k) / pieces));
      }
    }
    for (int pass = 0; pass < 400; ++pass) {
      double moved = 0.0;
      for (std::size_t i = 1; i + 1 < dense.size(); ++i) {
        const Vec2 a = dense[i - 1], c = dense[i + 1];
        const Vec2 d = c - a;
        const double len2 = dot(d, d);
        const double t = len2 > 0.0 ? std::clamp(dot(dense[i] - a, d) / len2, 0.0, 1.0) : 0.0;
        Vec2 step = a + d * t - dense[i];
        for (int k = 0; k < 6; ++k, step = step * 0.5) {
          const Vec2 cand = dense[i] + step;
          if (clear(a, cand) && clear(cand, c)) {
            moved += norm(step);
            dense[i] = cand;
            break;
          }
        }
      }
      if (moved < 1e-9) break;
    }
    return dense;
  };

  const std::vector<Vec2> taut = shortcut(tighten(shortcut(path)));
  double length = 0.0;
  for (std::size_t i = 1; i < taut.size(); ++i) length += distance(taut[i - 1], taut[i]);
  return std::max(length, distance(p, q));
}

Vec2 sample_point_in_region(const Disc& region, Rng& rng, double min_separation,
                            std::span<const Vec2> existing, int max_attempts) {
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    const double r = region.radius * std::sqrt(rng.uniform());
    const Vec2 candidate = region.center + from_polar(r, rng.angle());
    const bool ok = std::all_of(existing.begin(), existing.end(), [&](Vec2 e) {
      return distance(candidate, e) >= min_separation;
    });
    if (ok) return candidate;
  }
  throw Error("region overcrowded");
}

}  // namespace swarm
