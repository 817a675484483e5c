#include "swarm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include "swarm/error.hpp"

namespace swarm {

std::vector<int> count_trips(const EventLog& log, Window window) {
  if (!(window.t0 < window.t1)) throw Error("empty window");
  std::vector<int> counts(static_cast<std::size_t>(log.header.params.n_agents), 0);
  for (const StepRecord& r : log.records) {
    const double t = log.time_of(r.step);
    if (t < window.t0 || t >= window.t1) continue;
    for (const TransitionEvent& e : r.transitions) {
      if (e.from == AgentMode::SeekNest && e.to == AgentMode::SeekTarget) {
        ++counts.at(static_cast<std::size_t>(e.id));
      }
    }
  }
  return counts;
}

DelayResult navigation_delay(std::span<const int> counts, Window window,
                             const std::vector<bool>& selected) {
  DelayResult out;
  double sum = 0.0;
  std::size_t censored = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (!selected[i]) continue;
    ++out.population;
    if (counts[i] == 0) ++censored;
    sum += window.length() / static_cast<double>(std::max(counts[i], 1));
  }
  if (out.population == 0) throw Error("empty population");
  out.delay_s = sum / static_cast<double>(out.population);
  out.censored_fraction = static_cast<double>(censored) / static_cast<double>(out.population);
  return out;
}

namespace {

std::vector<bool> select(const EventLog& log, Window window, Population population) {
  std::vector<bool> selected(static_cast<std::size_t>(log.header.params.n_agents), true);
  if (population == Population::ForagersOnly) {
    const auto end_step = static_cast<std::int64_t>(std::floor(window.t1 / log.header.params.tau_s + 1e-9));
    const StepRecord* snap = log.snapshot_at_or_before(end_step);
    if (snap == nullptr) throw Error("no records");
    for (const AgentSnapshot& a : snap->agents) {
      selected.at(static_cast<std::size_t>(a.id)) = a.mode != AgentMode::Beacon;
    }
  }
  return selected;
}

}  // namespace

DelayResult navigation_delay(const EventLog& log, Window window, Population population) {
  return navigation_delay(count_trips(log, window), window, select(log, window, population));
}

std::optional<DelayResult> forager_delay(const EventLog& log, Window window) {
  const auto selected = select(log, window, Population::ForagersOnly);
  if (std::find(selected.begin(), selected.end(), true) == selected.end()) return std::nullopt;
  return navigation_delay(count_trips(log, window), window, selected);
}

std::optional<double> detect_t_conv(const EventLog& log) {
  for (const StepRecord& r : log.records) {
    for (const TransitionEvent& e : r.transitions) {
      if (e.from == AgentMode::SeekNest && e.to == AgentMode::SeekTarget) return log.time_of(r.step);
    }
  }
  return std::nullopt;
}

Dendrogram single_linkage(std::span<const Vec2> positions) {
  Dendrogram out;
  const std::size_t n = positions.size();
  out.n = n;
  if (n < 2) return out;

  struct Edge {
    double h;
    std::size_t a, b;
  };
  std::vector<Edge> edges;
  edges.reserve(n - 1);
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> best(n, inf);
  std::vector<std::size_t> link(n, 0);
  std::vector<char> in_tree(n, 0);
  std::size_t current = 0;
  in_tree[0] = 1;
  for (std::size_t added = 1; added < n; ++added) {
    std::size_t next = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (in_tree[i]) continue;
      const double d = distance(positions[current], positions[i]);
      if (d < best[i]) {
        best[i] = d;
        link[i] = current;
      }
      if (next == n || best[i] < best[next]) next = i;
    }
    in_tree[next] = 1;
    edges.push_back({best[next], std::min(next, link[next]), std::max(next, link[next])});
    current = next;
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
    if (x.h != y.h) return x.h < y.h;
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  });

  std::vector<std::size_t> parent(n), size(n, 1), min_member(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::iota(min_member.begin(), min_member.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const Edge& e : edges) {
    std::size_t ra = find(e.a), rb = find(e.b);
    if (min_member[ra] > min_member[rb]) std::swap(ra, rb);
    out.merges.push_back({e.h, size[ra], size[rb]});
    parent[rb] = ra;
    size[ra] += size[rb];
  }
  return out;
}

std::vector<std::size_t> cluster_sizes_at(const Dendrogram& dendrogram, double h) {
  std::multiset<std::size_t> sizes;
  for (std::size_t i = 0; i < dendrogram.n; ++i) sizes.insert(1);
  for (const Merge& m : dendrogram.merges) {
    if (!(m.height < h)) break;
    sizes.erase(sizes.find(m.left_size));
    sizes.erase(sizes.find(m.right_size));
    sizes.insert(m.left_size + m.right_size);
  }
  return {sizes.begin(), sizes.end()};
}

double social_entropy(std::span<const std::size_t> sizes, std::size_t n) {
  double h = 0.0;
  for (std::size_t s : sizes) {
    if (s == 0 || s == n) continue;
    const double p = static_cast<double>(s) / static_cast<double>(n);
    h -= p * std::log2(p);
  }
  return h;
}

double hierarchic_entropy(const Dendrogram& dendrogram, double delta0) {
  const std::size_t n = dendrogram.n;
  if (n < 2) return 0.0;
  // Entropy after i merges holds on [h_i, h_{i+1}); zero after the last.
  std::map<std::size_t, std::size_t> count{{1, n}};
  auto entropy = [&] {
    double h = 0.0;
    for (const auto& [s, c] : count) {
      if (s == n) continue;
      const double p = static_cast<double>(s) / static_cast<double>(n);
      h -= static_cast<double>(c) * p * std::log2(p);
    }
    return h;
  };
  auto take = [&](std::size_t s) {
    if (--count[s] == 0) count.erase(s);
  };
  double total = 0.0;
  double lower = 0.0;
  double current = entropy();
  for (const Merge& m : dendrogram.merges) {
    const double a = std::max(lower, delta0);
    const double b = std::max(m.height, delta0);
    if (b > a) total += current * (b - a);
    lower = m.height;
    take(m.left_size);
    take(m.right_size);
    ++count[m.left_size + m.right_size];
    current = entropy();
  }
  return total;
}

double entropy_normalizer(const Arena& arena, std::size_t n, Rng& rng, int draws,
                          double robot_radius, double delta0) {
  if (n < 2) return 0.0;
  if (draws < 1) throw Error("draws must be at least 1");
  double sum = 0.0;
  std::vector<Vec2> pts(n);
  for (int d = 0; d < draws; ++d) {
    for (Vec2& p : pts) {
      for (int attempt = 0;; ++attempt) {
        if (attempt > 100000) throw Error("arena has no free space");
        p = {rng.uniform(0.0, arena.width), rng.uniform(0.0, arena.height)};
        if (clearance(arena, p) >= robot_radius) break;
      }
    }
    sum += hierarchic_entropy(single_linkage(pts), delta0);
  }
  return sum / draws;
}

double lower_bound_delay(const Arena& arena, const SimParams& params) {
  const double path = shortest_path_length(arena, params.robot_radius_m, arena.nest.center,
                                           arena.target.center);
  return 2.0 * std::max(0.0, path - arena.nest.radius - arena.target.radius) / params.v0_mps;
}

std::vector<EntropySample> entropy_series(const EventLog& log, int every_steps,
                                          int normalizer_draws) {
  if (every_steps < 1) throw Error("entropy cadence must be at least 1");
  const SimParams& p = log.header.params;
  const double delta0 = 2.0 * p.robot_radius_m;
  std::map<std::size_t, double> normalizers;
  std::vector<EntropySample> out;
  std::vector<Vec2> pts;
  for (const StepRecord& r : log.records) {
    if (r.step % every_steps != 0 || !r.has_snapshot()) continue;
    pts.clear();
    for (const AgentSnapshot& a : r.agents) {
      if (is_forager(a.mode)) pts.push_back(a.pos);
    }
    EntropySample s;
    s.step = r.step;
    s.time_s = log.time_of(r.step);
    s.n_foragers = pts.size();
    s.entropy = hierarchic_entropy(single_linkage(pts), delta0);
    auto it = normalizers.find(pts.size());
    if (it == normalizers.end()) {
      Rng rng(derive_seed(p.seed, pts.size()));
      it = normalizers
               .emplace(pts.size(), entropy_normalizer(log.header.arena, pts.size(), rng,
                                                       normalizer_draws, p.robot_radius_m, delta0))
               .first;
    }
    s.normalized = it->second > 0.0 ? s.entropy / it->second : 0.0;
    out.push_back(s);
  }
  return out;
}

RunMetrics compute_run_metrics(const EventLog& log, std::optional<Window> window,
                               int entropy_every_steps, int normalizer_draws) {
  if (log.records.empty()) throw Error("no records");
  RunMetrics m;
  m.t_conv_s = detect_t_conv(log);
  const double end = log.time_of(log.records.back().step);
  m.window = window.value_or(Window{m.t_conv_s.value_or(0.0), end});
  m.delay_all = navigation_delay(log, m.window, Population::All);
  m.delay_foragers = forager_delay(log, m.window);
  m.lower_bound_s = lower_bound_delay(log.header.arena, log.header.params);
  for (const AgentSnapshot& a : log.final_snapshot().agents) {
    if (a.mode == AgentMode::Beacon) ++m.final_beacons;
  }
  m.entropy = entropy_series(log, entropy_every_steps, normalizer_draws);
  double sum = 0.0;
  std::size_t count = 0;
  for (const EntropySample& s : m.entropy) {
    if (s.time_s < m.window.t0 || s.time_s > m.window.t1) continue;
    sum += s.normalized;
    ++count;
  }
  m.entropy_in_window = count > 0 ? sum / static_cast<double>(count) : 0.0;
  return m;
}

}  // namespace swarm
