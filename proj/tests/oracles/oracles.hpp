#pragma once

// Independent reference implementations used as test oracles. They are
// deliberately naive and share no code with the library beyond types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <queue>
#include <vector>

#include "swarm/geometry.hpp"
#include "swarm/metrics.hpp"

namespace oracle {

using swarm::Vec2;

// O(n^3) agglomeration: repeatedly merge the closest pair of clusters
// (single-link distance), ties by smallest (cluster-min index) pair.
inline std::vector<swarm::Merge> brute_single_linkage(const std::vector<Vec2>& pts) {
  std::vector<std::vector<std::size_t>> clusters;
  for (std::size_t i = 0; i < pts.size(); ++i) clusters.push_back({i});
  std::vector<swarm::Merge> merges;
  while (clusters.size() > 1) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t ba = 0, bb = 0;
    for (std::size_t a = 0; a < clusters.size(); ++a)
      for (std::size_t b = a + 1; b < clusters.size(); ++b) {
        double d = std::numeric_limits<double>::infinity();
        for (std::size_t i : clusters[a])
          for (std::size_t j : clusters[b]) d = std::min(d, swarm::distance(pts[i], pts[j]));
        if (d < best) {
          best = d;
          ba = a;
          bb = b;
        }
      }
    auto& A = clusters[ba];
    auto& B = clusters[bb];
    const bool a_first = *std::min_element(A.begin(), A.end()) < *std::min_element(B.begin(), B.end());
    merges.push_back({best, a_first ? A.size() : B.size(), a_first ? B.size() : A.size()});
    A.insert(A.end(), B.begin(), B.end());
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bb));
  }
  return merges;
}

// Cluster sizes with all pairs closer than h linked, by flood fill.
inline std::vector<std::size_t> brute_cluster_sizes(const std::vector<Vec2>& pts, double h) {
  const std::size_t n = pts.size();
  std::vector<int> label(n, -1);
  std::vector<std::size_t> sizes;
  for (std::size_t s = 0; s < n; ++s) {
    if (label[s] >= 0) continue;
    const int id = static_cast<int>(sizes.size());
    std::size_t count = 0;
    std::vector<std::size_t> stack{s};
    label[s] = id;
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      ++count;
      for (std::size_t j = 0; j < n; ++j)
        if (label[j] < 0 && swarm::distance(pts[i], pts[j]) < h) {
          label[j] = id;
          stack.push_back(j);
        }
    }
    sizes.push_back(count);
  }
  return sizes;
}

inline double entropy_bits(const std::vector<std::size_t>& sizes, std::size_t n) {
  double h = 0.0;
  for (std::size_t s : sizes) {
    const double p = static_cast<double>(s) / static_cast<double>(n);
    h -= p * std::log2(p);
  }
  return h;
}

// Trapezoid rule for the integral of H(h) from delta0 up to the largest
// pairwise distance (H is 0 beyond it).
inline double trapezoid_entropy(const std::vector<Vec2>& pts, double delta0, double dh) {
  double top = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) top = std::max(top, swarm::distance(pts[i], pts[j]));
  if (top <= delta0) return 0.0;
  const auto steps = static_cast<std::size_t>(std::ceil((top - delta0) / dh));
  const double step = (top - delta0) / static_cast<double>(steps);
  double sum = 0.0;
  double prev = entropy_bits(brute_cluster_sizes(pts, delta0), pts.size());
  for (std::size_t k = 1; k <= steps; ++k) {
    const double h = delta0 + step * static_cast<double>(k);
    const double cur = entropy_bits(brute_cluster_sizes(pts, h), pts.size());
    sum += 0.5 * (prev + cur) * step;
    prev = cur;
  }
  return sum;
}

// Dijkstra on a fine grid with every primitive move up to 4 cells out
// (48 directions), cells free when their center clears the robot radius.
inline double fine_grid_path(const swarm::Arena& arena, double robot_radius, Vec2 p, Vec2 q,
                             double cell = 0.002) {
  const int nx = static_cast<int>(std::floor(arena.width / cell));
  const int ny = static_cast<int>(std::floor(arena.height / cell));
  auto center = [&](int i, int j) { return Vec2{(i + 0.5) * cell, (j + 0.5) * cell}; };
  std::vector<char> free(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      free[static_cast<std::size_t>(j) * nx + i] = swarm::clearance(arena, center(i, j)) > robot_radius;
  auto is_free = [&](int i, int j) {
    return i >= 0 && j >= 0 && i < nx && j < ny && free[static_cast<std::size_t>(j) * nx + i];
  };

  struct Move {
    int dx, dy;
    double cost;
    std::vector<std::pair<int, int>> cells;  // cells swept, relative
  };
  std::vector<Move> moves;
  for (int dx = -4; dx <= 4; ++dx)
    for (int dy = -4; dy <= 4; ++dy) {
      if ((dx == 0 && dy == 0) || std::gcd(std::abs(dx), std::abs(dy)) != 1) continue;
      Move m{dx, dy, cell * std::hypot(dx, dy), {}};
      for (int s = 1; s < 64; ++s) {
        const double t = s / 64.0;
        const std::pair<int, int> c{static_cast<int>(std::floor(dx * t + 0.5)),
                                    static_cast<int>(std::floor(dy * t + 0.5))};
        if (m.cells.empty() || m.cells.back() != c) m.cells.push_back(c);
      }
      moves.push_back(std::move(m));
    }

  auto nearest_free = [&](Vec2 x) {
    const int ci = static_cast<int>(x.x / cell), cj = static_cast<int>(x.y / cell);
    double best = std::numeric_limits<double>::infinity();
    std::pair<int, int> out{-1, -1};
    for (int dj = -3; dj <= 3; ++dj)
      for (int di = -3; di <= 3; ++di)
        if (is_free(ci + di, cj + dj)) {
          const double d = swarm::distance(center(ci + di, cj + dj), x);
          if (d < best) {
            best = d;
            out = {ci + di, cj + dj};
          }
        }
    return std::pair{out, best};
  };
  const auto [src, d_src] = nearest_free(p);
  const auto [dst, d_dst] = nearest_free(q);
  if (src.first < 0 || dst.first < 0) return -1.0;

  std::vector<double> dist(free.size(), std::numeric_limits<double>::infinity());
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  const std::size_t s = static_cast<std::size_t>(src.second) * nx + src.first;
  const std::size_t goal = static_cast<std::size_t>(dst.second) * nx + dst.first;
  dist[s] = 0.0;
  pq.push({0.0, s});
  while (!pq.empty()) {
    const auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    if (u == goal) break;
    const int ui = static_cast<int>(u % nx), uj = static_cast<int>(u / nx);
    for (const Move& m : moves) {
      bool ok = is_free(ui + m.dx, uj + m.dy);
      for (std::size_t k = 0; ok && k < m.cells.size(); ++k) ok = is_free(ui + m.cells[k].first, uj + m.cells[k].second);
      if (!ok) continue;
      const std::size_t v = static_cast<std::size_t>(uj + m.dy) * nx + (ui + m.dx);
      if (d + m.cost < dist[v]) {
        dist[v] = d + m.cost;
        pq.push({dist[v], v});
      }
    }
  }
  if (!std::isfinite(dist[goal])) return -1.0;
  return dist[goal] + d_src + d_dst;
}

// Pearson chi-square statistic of observed counts against equal expected.
inline double chi_square_uniform(const std::vector<std::size_t>& counts) {
  double total = 0.0;
  for (std::size_t c : counts) total += static_cast<double>(c);
  const double expected = total / static_cast<double>(counts.size());
  double chi = 0.0;
  for (std::size_t c : counts) chi += (static_cast<double>(c) - expected) * (static_cast<double>(c) - expected) / expected;
  return chi;
}

// Upper critical values of chi-square at alpha = 0.001.
inline double chi_square_critical_001(int dof) {
  switch (dof) {
    case 9: return 27.877;
    case 15: return 37.697;
    case 19: return 43.820;
    case 35: return 66.619;
    default: return std::numeric_limits<double>::quiet_NaN();
  }
}

}  // namespace oracle
