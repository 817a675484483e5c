#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "swarm/config.hpp"
#include "swarm/engine.hpp"
#include "swarm/metrics.hpp"

namespace swarm {

inline constexpr int kCsvSchemaVersion = 1;

// Metrics CSV, one row per line after a header:
//   schema_version  always kCsvSchemaVersion
//   row_type        run | aggregate | baseline
//   scenario, n, seed (empty on aggregate/baseline rows)
//   status          ok, or "error: <message>" for a failed run
//   t_conv_s        empty when no trip was completed
//   window_t0_s, window_t1_s
//   delay_all_s, delay_foragers_s, delay_random_baseline_s, censored_fraction,
//   lower_bound_s, final_beacons, entropy_post_conv
//   delay_foragers_iqr_s, delay_all_iqr_s, delay_random_baseline_iqr_s
//                   aggregate/baseline rows only
//   log, entropy_series   paths relative to the CSV's directory
// Aggregate rows hold medians over the ok runs of one (scenario, n); the
// baseline row holds the median of the eps=1 baseline delays.
struct MetricsRow {
  std::string row_type = "run";
  std::string scenario;
  int n = 0;
  std::optional<std::uint64_t> seed;
  std::string status = "ok";
  std::optional<double> t_conv_s;
  std::optional<Window> window;
  std::optional<double> delay_all_s;
  std::optional<double> delay_foragers_s;
  std::optional<double> delay_random_baseline_s;
  std::optional<double> censored_fraction;
  std::optional<double> lower_bound_s;
  std::optional<double> final_beacons;
  std::optional<double> entropy_post_conv;
  std::optional<double> delay_foragers_iqr_s;
  std::optional<double> delay_all_iqr_s;
  std::optional<double> delay_random_baseline_iqr_s;
  std::string log;
  std::string entropy_series;
};

std::vector<std::string> csv_columns();
void write_csv(std::ostream& out, const std::vector<MetricsRow>& rows);
/// Writes to `<path>.tmp` and renames into place.
void save_csv(const std::filesystem::path& path, const std::vector<MetricsRow>& rows);
std::vector<MetricsRow> read_csv(std::istream& in);
std::vector<MetricsRow> load_csv(const std::filesystem::path& path);

/// Metrics row for one log; `window` defaults to [t_conv, T].
MetricsRow metrics_row(const EventLog& log, std::optional<Window> window = std::nullopt);

/// Forager delay of an eps=1 run with the same params, arena and seed, over
/// the same window. Absent when that run ends with no foragers.
std::optional<double> random_baseline_delay(const SimParams& params, const Arena& arena,
                                            Window window, int snapshot_every = 5);

void write_entropy_series(std::ostream& out, const std::vector<EntropySample>& samples);
std::vector<EntropySample> load_entropy_series(const std::filesystem::path& path);

/// Median and interquartile range (linear interpolation between order
/// statistics). Throws on empty input.
double median(std::vector<double> values);
double iqr(std::vector<double> values);

struct SweepOutput {
  std::vector<MetricsRow> rows;
  std::filesystem::path csv;
};

/// Runs every (scenario, size, seed) combination plus the random baseline,
/// writing logs, entropy series and `metrics.csv` under `out_dir`. A failed
/// run becomes an error row; the sweep continues.
SweepOutput run_sweep(const SweepConfig& sweep, const std::filesystem::path& out_dir,
                      std::ostream* progress = nullptr);

}  // namespace swarm
