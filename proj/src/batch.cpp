#include "swarm/batch.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <mutex>
#include <thread>

#include "swarm/error.hpp"
#include "swarm/event_log.hpp"

namespace swarm {

namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

// Splits one CSV record; handles quoted fields, including embedded newlines.
bool read_record(std::istream& in, std::vector<std::string>& fields) {
  fields.clear();
  if (in.peek() == std::char_traits<char>::eof()) return false;
  std::string field;
  bool quoted = false;
  char c;
  while (in.get(c)) {
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      break;
    } else if (c != '\r') {
      field += c;
    }
  }
  fields.push_back(std::move(field));
  return true;
}

std::optional<double> parse_opt(const std::string& s, std::size_t line, const char* column) {
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw Error("csv line " + std::to_string(line) + ": column " + column + ": bad number '" + s + "'");
  return v;
}

double sample_quantile(std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::string run_name(const std::string& scenario, int n, std::uint64_t seed) {
  return scenario + "_n" + std::to_string(n) + "_s" + std::to_string(seed);
}

template <typename Get>
std::vector<double> collect(const std::vector<MetricsRow>& rows, Get get) {
  std::vector<double> out;
  for (const MetricsRow& r : rows)
    if (const std::optional<double> v = get(r)) out.push_back(*v);
  return out;
}

std::optional<double> median_opt(const std::vector<double>& v) {
  return v.empty() ? std::nullopt : std::optional(median(v));
}
std::optional<double> iqr_opt(const std::vector<double>& v) {
  return v.empty() ? std::nullopt : std::optional(iqr(v));
}

}  // namespace

double median(std::vector<double> values) {
  if (values.empty()) throw Error("median of empty sample");
  std::sort(values.begin(), values.end());
  return sample_quantile(values, 0.5);
}

double iqr(std::vector<double> values) {
  if (values.empty()) throw Error("iqr of empty sample");
  std::sort(values.begin(), values.end());
  return sample_quantile(values, 0.75) - sample_quantile(values, 0.25);
}

std::vector<std::string> csv_columns() {
  return {"schema_version", "row_type", "scenario", "n", "seed", "status", "t_conv_s",
          "window_t0_s", "window_t1_s", "delay_all_s", "delay_foragers_s",
          "delay_random_baseline_s", "censored_fraction", "lower_bound_s", "final_beacons",
          "entropy_post_conv", "delay_foragers_iqr_s", "delay_all_iqr_s",
          "delay_random_baseline_iqr_s", "log", "entropy_series"};
}

void write_csv(std::ostream& out, const std::vector<MetricsRow>& rows) {
  const auto cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (const MetricsRow& r : rows) {
    out << kCsvSchemaVersion << ',' << r.row_type << ',' << quote(r.scenario) << ',' << r.n << ','
        << (r.seed ? std::to_string(*r.seed) : "") << ',' << quote(r.status) << ','
        << fmt(r.t_conv_s) << ',' << (r.window ? fmt(r.window->t0) : "") << ','
        << (r.window ? fmt(r.window->t1) : "") << ',' << fmt(r.delay_all_s) << ','
        << fmt(r.delay_foragers_s) << ',' << fmt(r.delay_random_baseline_s) << ','
        << fmt(r.censored_fraction) << ',' << fmt(r.lower_bound_s) << ','
        << fmt(r.final_beacons) << ',' << fmt(r.entropy_post_conv) << ','
        << fmt(r.delay_foragers_iqr_s) << ',' << fmt(r.delay_all_iqr_s) << ','
        << fmt(r.delay_random_baseline_iqr_s) << ',' << quote(r.log) << ','
        << quote(r.entropy_series) << '\n';
  }
}

void save_csv(const fs::path& path, const std::vector<MetricsRow>& rows) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error("cannot write " + tmp.string());
    write_csv(out, rows);
    if (!out) throw Error("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::vector<MetricsRow> read_csv(std::istream& in) {
  std::vector<std::string> f;
  if (!read_record(in, f)) throw Error("csv: empty input");
  const auto cols = csv_columns();
  if (f != cols) throw Error("csv: unexpected header");
  std::vector<MetricsRow> rows;
  std::size_t line = 1;
  while (read_record(in, f)) {
    ++line;
    if (f.size() == 1 && f[0].empty()) continue;
    if (f.size() != cols.size())
      throw Error("csv line " + std::to_string(line) + ": expected " + std::to_string(cols.size()) +
                  " fields, got " + std::to_string(f.size()));
    if (f[0] != std::to_string(kCsvSchemaVersion))
      throw Error("csv schema version mismatch: file has version " + f[0] + ", this build reads version " +
                  std::to_string(kCsvSchemaVersion));
    MetricsRow r;
    r.row_type = f[1];
    r.scenario = f[2];
    r.n = static_cast<int>(parse_opt(f[3], line, "n").value_or(0));
    if (!f[4].empty()) r.seed = std::stoull(f[4]);
    r.status = f[5];
    r.t_conv_s = parse_opt(f[6], line, "t_conv_s");
    const auto t0 = parse_opt(f[7], line, "window_t0_s");
    const auto t1 = parse_opt(f[8], line, "window_t1_s");
    if (t0 && t1) r.window = Window{*t0, *t1};
    r.delay_all_s = parse_opt(f[9], line, "delay_all_s");
    r.delay_foragers_s = parse_opt(f[10], line, "delay_foragers_s");
    r.delay_random_baseline_s = parse_opt(f[11], line, "delay_random_baseline_s");
    r.censored_fraction = parse_opt(f[12], line, "censored_fraction");
    r.lower_bound_s = parse_opt(f[13], line, "lower_bound_s");
    r.final_beacons = parse_opt(f[14], line, "final_beacons");
    r.entropy_post_conv = parse_opt(f[15], line, "entropy_post_conv");
    r.delay_foragers_iqr_s = parse_opt(f[16], line, "delay_foragers_iqr_s");
    r.delay_all_iqr_s = parse_opt(f[17], line, "delay_all_iqr_s");
    r.delay_random_baseline_iqr_s = parse_opt(f[18], line, "delay_random_baseline_iqr_s");
    r.log = f[19];
    r.entropy_series = f[20];
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<MetricsRow> load_csv(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  return read_csv(in);
}

namespace {

MetricsRow row_from(const EventLog& log, const RunMetrics& m) {
  MetricsRow r;
  r.n = log.header.params.n_agents;
  r.seed = log.header.params.seed;
  r.t_conv_s = m.t_conv_s;
  r.window = m.window;
  r.delay_all_s = m.delay_all.delay_s;
  if (m.delay_foragers) {
    r.delay_foragers_s = m.delay_foragers->delay_s;
    r.censored_fraction = m.delay_foragers->censored_fraction;
  }
  r.lower_bound_s = m.lower_bound_s;
  r.final_beacons = static_cast<double>(m.final_beacons);
  r.entropy_post_conv = m.entropy_in_window;
  return r;
}

}  // namespace

MetricsRow metrics_row(const EventLog& log, std::optional<Window> window) {
  return row_from(log, compute_run_metrics(log, window));
}

std::optional<double> random_baseline_delay(const SimParams& params, const Arena& arena,
                                           Window window, int snapshot_every) {
  SimParams p = params;
  p.epsilon = 1.0;
  const EventLog log = run(p, arena, {}, RunOptions{snapshot_every});
  const auto d = forager_delay(log, window);
  if (!d) return std::nullopt;
  return d->delay_s;
}

void write_entropy_series(std::ostream& out, const std::vector<EntropySample>& samples) {
  out << "step,time_s,n_foragers,entropy,normalized\n";
  for (const EntropySample& s : samples)
    out << s.step << ',' << fmt(s.time_s) << ',' << s.n_foragers << ',' << fmt(s.entropy) << ','
        << fmt(s.normalized) << '\n';
}

std::vector<EntropySample> load_entropy_series(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::vector<std::string> f;
  if (!read_record(in, f) || f.size() != 5 || f[0] != "step")
    throw Error(path.string() + ": not an entropy series");
  std::vector<EntropySample> out;
  std::size_t line = 1;
  while (read_record(in, f)) {
    ++line;
    if (f.size() == 1 && f[0].empty()) continue;
    if (f.size() != 5) throw Error(path.string() + ": line " + std::to_string(line) + ": expected 5 fields");
    EntropySample s;
    s.step = static_cast<std::int64_t>(*parse_opt(f[0], line, "step"));
    s.time_s = *parse_opt(f[1], line, "time_s");
    s.n_foragers = static_cast<std::size_t>(*parse_opt(f[2], line, "n_foragers"));
    s.entropy = *parse_opt(f[3], line, "entropy");
    s.normalized = *parse_opt(f[4], line, "normalized");
    out.push_back(s);
  }
  return out;
}

SweepOutput run_sweep(const SweepConfig& sweep, const fs::path& out_dir, std::ostream* progress) {
  sweep.validate();
  struct Task {
    std::string scenario;
    int n;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (const std::string& sc : sweep.scenarios)
    for (int n : sweep.sizes)
      for (std::uint64_t seed : sweep.seeds) tasks.push_back({sc, n, seed});

  fs::create_directories(out_dir / "logs");
  fs::create_directories(out_dir / "entropy");

  std::vector<MetricsRow> results(tasks.size());
  std::mutex progress_mutex;
  auto execute = [&](std::size_t i) {
    const Task& t = tasks[i];
    MetricsRow row;
    try {
      RunConfig c = sweep.base;
      if (t.scenario != c.scenario) c.arena = scenario_arena(t.scenario);
      c.params.n_agents = t.n;
      c.params.seed = t.seed;
      validate(c);
      const EventLog log = run(c.params, c.arena, c.extensions, RunOptions{sweep.snapshot_every});
      const std::string name = run_name(t.scenario, t.n, t.seed);
      const RunMetrics metrics = compute_run_metrics(log);
      row = row_from(log, metrics);
      row.log = "logs/" + name + ".jsonl";
      row.entropy_series = "entropy/" + name + ".csv";
      save_event_log(out_dir / row.log, log);
      {
        const fs::path path = out_dir / row.entropy_series;
        const fs::path tmp = path.string() + ".tmp";
        std::ofstream out(tmp, std::ios::binary);
        write_entropy_series(out, metrics.entropy);
        out.close();
        fs::rename(tmp, path);
      }
      row.delay_random_baseline_s =
          random_baseline_delay(c.params, c.arena, *row.window, sweep.snapshot_every);
    } catch (const std::exception& e) {
      row = MetricsRow{};
      row.status = std::string("error: ") + e.what();
    }
    row.row_type = "run";
    row.scenario = t.scenario;
    row.n = t.n;
    row.seed = t.seed;
    results[i] = std::move(row);
    if (progress) {
      std::lock_guard lock(progress_mutex);
      *progress << run_name(t.scenario, t.n, t.seed) << ": " << results[i].status << '\n';
    }
  };

  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(sweep.jobs), tasks.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) execute(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) execute(i);
      });
    for (std::thread& th : pool) th.join();
  }

  SweepOutput output;
  std::size_t i = 0;
  for (const std::string& sc : sweep.scenarios) {
    for (int n : sweep.sizes) {
      std::vector<MetricsRow> ok;
      for (std::size_t s = 0; s < sweep.seeds.size(); ++s, ++i) {
        output.rows.push_back(results[i]);
        if (results[i].status == "ok") ok.push_back(results[i]);
      }
      MetricsRow agg;
      agg.row_type = "aggregate";
      agg.scenario = sc;
      agg.n = n;
      agg.status = ok.empty() ? "error: no successful runs" : "ok";
      const auto t_conv = collect(ok, [](const MetricsRow& r) { return r.t_conv_s; });
      const auto all = collect(ok, [](const MetricsRow& r) { return r.delay_all_s; });
      const auto foragers = collect(ok, [](const MetricsRow& r) { return r.delay_foragers_s; });
      const auto baseline = collect(ok, [](const MetricsRow& r) { return r.delay_random_baseline_s; });
      agg.t_conv_s = median_opt(t_conv);
      agg.delay_all_s = median_opt(all);
      agg.delay_all_iqr_s = iqr_opt(all);
      agg.delay_foragers_s = median_opt(foragers);
      agg.delay_foragers_iqr_s = iqr_opt(foragers);
      agg.censored_fraction = median_opt(collect(ok, [](const MetricsRow& r) { return r.censored_fraction; }));
      agg.lower_bound_s = median_opt(collect(ok, [](const MetricsRow& r) { return r.lower_bound_s; }));
      agg.final_beacons = median_opt(collect(ok, [](const MetricsRow& r) { return r.final_beacons; }));
      agg.entropy_post_conv = median_opt(collect(ok, [](const MetricsRow& r) { return r.entropy_post_conv; }));
      output.rows.push_back(agg);

      MetricsRow base;
      base.row_type = "baseline";
      base.scenario = sc;
      base.n = n;
      base.status = agg.status;
      base.delay_random_baseline_s = median_opt(baseline);
      base.delay_random_baseline_iqr_s = iqr_opt(baseline);
      base.lower_bound_s = agg.lower_bound_s;
      output.rows.push_back(base);
    }
  }
  output.csv = out_dir / "metrics.csv";
  save_csv(output.csv, output.rows);
  return output;
}

}  // namespace swarm
