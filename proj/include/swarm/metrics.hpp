#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "swarm/engine.hpp"
#include "swarm/geometry.hpp"
#include "swarm/rng.hpp"

namespace swarm {

/// Time window [t0, t1) in seconds.
struct Window {
  double t0 = 0.0;
  double t1 = 0.0;
  double length() const { return t1 - t0; }
};

/// Per-agent count of completed trips (F2 -> F1 transitions) whose time
/// falls in [t0, t1). Throws "empty window" when t0 >= t1.
std::vector<int> count_trips(const EventLog& log, Window window);

enum class Population { All, ForagersOnly };

struct DelayResult {
  double delay_s = 0.0;
  // Share of the population with zero trips, each counted as one trip.
  double censored_fraction = 0.0;
  std::size_t population = 0;
};

/// Mean of window length / max(trips, 1) over the selected agents.
/// Throws "empty population".
DelayResult navigation_delay(std::span<const int> counts, Window window,
                             const std::vector<bool>& selected);
/// `ForagersOnly` selects agents that are not beacons at the window end.
DelayResult navigation_delay(const EventLog& log, Window window, Population population);

/// ForagersOnly delay, absent when every agent is a beacon at the window end.
std::optional<DelayResult> forager_delay(const EventLog& log, Window window);

/// Time of the first completed trip, if any.
std::optional<double> detect_t_conv(const EventLog& log);

struct Merge {
  double height = 0.0;
  // Sizes of the merged clusters, ordered by their smallest member index.
  std::size_t left_size = 0;
  std::size_t right_size = 0;
};

struct Dendrogram {
  std::size_t n = 0;
  std::vector<Merge> merges;  // non-decreasing heights
};

/// Single-linkage agglomeration under Euclidean distance (Prim's MST).
Dendrogram single_linkage(std::span<const Vec2> positions);

/// Cluster sizes when points closer than h are linked.
std::vector<std::size_t> cluster_sizes_at(const Dendrogram& dendrogram, double h);

/// Shannon entropy in bits of the cluster-size fractions.
double social_entropy(std::span<const std::size_t> sizes, std::size_t n);

/// Exact integral over h in [delta0, inf) of the cluster entropy.
double hierarchic_entropy(const Dendrogram& dendrogram, double delta0 = 0.04);

/// Mean hierarchic entropy of `n` points placed uniformly in free space.
double entropy_normalizer(const Arena& arena, std::size_t n, Rng& rng, int draws = 100,
                          double robot_radius = 0.02, double delta0 = 0.04);

/// Round trip of an ideal agent along the shortest path between the goal
/// discs: 2 * max(0, path(center_S, center_T) - r_S - r_T) / v0.
double lower_bound_delay(const Arena& arena, const SimParams& params);

struct EntropySample {
  std::int64_t step = 0;
  double time_s = 0.0;
  std::size_t n_foragers = 0;
  double entropy = 0.0;
  double normalized = 0.0;
};

/// Forager-only hierarchic entropy on snapshot steps that are multiples of
/// `every_steps`, normalized by entropy_normalizer for the current forager
/// count (seeded from the log seed and the count).
std::vector<EntropySample> entropy_series(const EventLog& log, int every_steps = 5,
                                          int normalizer_draws = 100);

struct RunMetrics {
  std::optional<double> t_conv_s;
  Window window;
  DelayResult delay_all;
  // Absent when every agent is a beacon at the end of the window.
  std::optional<DelayResult> delay_foragers;
  double lower_bound_s = 0.0;
  std::size_t final_beacons = 0;
  // Mean normalized entropy over samples inside the window.
  double entropy_in_window = 0.0;
  std::vector<EntropySample> entropy;
};

/// All per-run metrics. The default window is [t_conv, T], or [0, T] when
/// no trip was completed.
RunMetrics compute_run_metrics(const EventLog& log, std::optional<Window> window = std::nullopt,
                               int entropy_every_steps = 5, int normalizer_draws = 100);

}  // namespace swarm
