// swarmsim: run, sweep, analyze and render beacon/forager swarm simulations.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 runtime failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "swarm/batch.hpp"
#include "swarm/config.hpp"
#include "swarm/error.hpp"
#include "swarm/event_log.hpp"
#include "swarm/metrics.hpp"
#include "swarm/render.hpp"

namespace fs = std::filesystem;
using namespace swarm;

namespace {

constexpr int kUsageError = 1;
constexpr int kRuntimeError = 2;

// Errors in configuration or arguments, reported with exit code 1.
struct UsageError : Error {
  using Error::Error;
};

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> scenario;
  std::optional<int> n;
  std::optional<std::string> extension;
  std::vector<std::int64_t> at_steps;
  bool plots = false;
  std::optional<std::string> window;
  int jobs = 0;
  std::vector<std::string> inputs;
};

Window parse_window(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw UsageError("--window: expected T0:T1 in seconds");
  try {
    std::size_t used0 = 0, used1 = 0;
    const std::string a = s.substr(0, colon), b = s.substr(colon + 1);
    const Window w{std::stod(a, &used0), std::stod(b, &used1)};
    if (used0 != a.size() || used1 != b.size()) throw std::invalid_argument(s);
    if (!(w.t0 < w.t1)) throw UsageError("--window: need T0 < T1");
    return w;
  } catch (const std::logic_error&) {
    throw UsageError("--window: expected T0:T1 in seconds, got '" + s + "'");
  }
}

Overrides overrides_from(const Flags& f) {
  Overrides o;
  o.seed = f.seed;
  o.n_agents = f.n;
  if (f.scenario) {
    try {
      scenario_arena(*f.scenario);
    } catch (const Error& e) {
      throw UsageError(std::string("--scenario: ") + e.what());
    }
    o.scenario = f.scenario;
  }
  if (f.out) o.out_dir = fs::path(*f.out);
  if (f.extension) o.extension = (*f.extension == "on");
  if (!f.at_steps.empty()) o.at_step = f.at_steps.front();
  if (f.plots) o.plots = true;
  if (f.window) o.window = parse_window(*f.window);
  return o;
}

template <typename Config, typename Load>
Config load_config(const Flags& f, Load load, Config fallback) {
  if (f.config.empty()) return fallback;
  try {
    return load(fs::path(f.config));
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

RunConfig effective_run_config(const Flags& f) {
  RunConfig c = load_config<RunConfig>(f, load_run_config, default_run_config());
  try {
    apply_overrides(c, overrides_from(f));
    for (const std::string& w : validate(c)) std::cerr << "warning: " << w << '\n';
  } catch (const UsageError&) {
    throw;
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  return c;
}

void print_header(const RunConfig& c) {
  std::cout << "# swarmsim " << SWARM_VERSION << " (rng " << Rng::kAlgorithm << ")\n";
  std::istringstream lines(describe(c));
  for (std::string line; std::getline(lines, line);) std::cout << "# " << line << '\n';
}

std::string fmt_opt(const std::optional<double>& v, const char* unit = "") {
  if (!v) return "absent";
  std::ostringstream os;
  os.precision(4);
  os << *v << unit;
  return os.str();
}

int cmd_run(const Flags& f) {
  const RunConfig c = effective_run_config(f);
  print_header(c);
  const EventLog log = run(c.params, c.arena, c.extensions, RunOptions{c.snapshot_every});
  fs::create_directories(c.out_dir);
  const fs::path path = c.out_dir / (c.scenario + "_n" + std::to_string(c.params.n_agents) + "_s" +
                                     std::to_string(c.params.seed) + ".jsonl");
  save_event_log(path, log);

  const RunMetrics m = compute_run_metrics(log, c.window);
  std::cout << "log: " << path.string() << '\n'
            << "t_conv: " << fmt_opt(m.t_conv_s, " s") << '\n'
            << "final beacons: " << m.final_beacons << '\n'
            << "window: [" << m.window.t0 << ", " << m.window.t1 << ") s\n"
            << "delay (foragers): "
            << fmt_opt(m.delay_foragers ? std::optional(m.delay_foragers->delay_s) : std::nullopt, " s")
            << " (censored "
            << fmt_opt(m.delay_foragers ? std::optional(m.delay_foragers->censored_fraction) : std::nullopt)
            << ")\n"
            << "delay (all): " << fmt_opt(m.delay_all.delay_s, " s") << '\n'
            << "lower bound: " << fmt_opt(m.lower_bound_s, " s") << '\n';
  int gaps = 0;
  for (const StepRecord& r : log.records) gaps += r.coverage_gaps;
  if (c.extensions.enabled) std::cout << "coverage gaps: " << gaps << '\n';
  return 0;
}

int cmd_batch(const Flags& f) {
  SweepConfig s = load_config<SweepConfig>(f, load_sweep_config, SweepConfig{default_run_config()});
  try {
    apply_overrides(s, overrides_from(f));
    if (f.jobs > 0) s.jobs = f.jobs;
    s.validate();
    // Validate every scenario/size combination before running anything.
    for (const std::string& sc : s.scenarios)
      for (int n : s.sizes) {
        RunConfig c = s.base;
        if (sc != c.scenario) c.arena = scenario_arena(sc);
        c.params.n_agents = n;
        for (const std::string& w : validate(c)) std::cerr << "warning: " << sc << " N=" << n << ": " << w << '\n';
      }
  } catch (const UsageError&) {
    throw;
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  print_header(s.base);
  std::cout << "# sweep: " << s.scenarios.size() << " scenarios x " << s.sizes.size() << " sizes x "
            << s.seeds.size() << " seeds, jobs " << s.jobs << '\n';
  const SweepOutput out = run_sweep(s, s.base.out_dir, &std::cerr);
  std::size_t failed = 0;
  for (const MetricsRow& r : out.rows)
    if (r.row_type == "run" && r.status != "ok") ++failed;
  std::cout << "metrics: " << out.csv.string() << '\n';
  for (const MetricsRow& r : out.rows)
    if (r.row_type == "aggregate")
      std::cout << r.scenario << " N=" << r.n << ": median forager delay "
                << fmt_opt(r.delay_foragers_s, " s") << ", median t_conv " << fmt_opt(r.t_conv_s, " s") << '\n';
  if (failed) std::cout << failed << " run(s) failed; see status column\n";
  return 0;
}

int cmd_metrics(const Flags& f) {
  if (f.inputs.empty()) throw UsageError("metrics: need at least one log file");
  RunConfig c = load_config<RunConfig>(f, load_run_config, default_run_config());
  apply_overrides(c, overrides_from(f));
  std::vector<MetricsRow> rows;
  for (const std::string& in : f.inputs) {
    const EventLog log = load_event_log(in);
    MetricsRow r = metrics_row(log, c.window);
    r.scenario = fs::path(in).stem().string();
    r.log = in;
    rows.push_back(std::move(r));
  }
  if (f.out || c.sources.at("output.dir") == Source::File) {
    const fs::path path = c.out_dir / "metrics.csv";
    save_csv(path, rows);
    std::cout << "metrics: " << path.string() << '\n';
  } else {
    write_csv(std::cout, rows);
  }
  return 0;
}

void write_text(const fs::path& path, const std::string& text) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error("cannot write " + tmp.string());
    out << text;
  }
  fs::rename(tmp, path);
  std::cout << "wrote " << path.string() << '\n';
}

int cmd_render(const Flags& f) {
  if (f.inputs.size() != 1) throw UsageError("render: need exactly one input file");
  RunConfig c = load_config<RunConfig>(f, load_run_config, default_run_config());
  apply_overrides(c, overrides_from(f));
  const fs::path input = f.inputs.front();

  if (c.plots) {
    const std::vector<MetricsRow> rows = load_csv(input);
    const std::string delay = render_delay_plot(rows);
    // One curve per (scenario, N): median normalized entropy over seeds.
    std::map<std::pair<std::string, int>, std::vector<std::vector<EntropySample>>> groups;
    for (const MetricsRow& r : rows)
      if (r.row_type == "run" && r.status == "ok" && !r.entropy_series.empty())
        groups[{r.scenario, r.n}].push_back(load_entropy_series(input.parent_path() / r.entropy_series));
    std::vector<EntropyCurve> curves;
    for (const auto& [key, series] : groups) {
      EntropyCurve curve{key.first + " N=" + std::to_string(key.second), {}};
      std::size_t len = series.front().size();
      for (const auto& s : series) len = std::min(len, s.size());
      for (std::size_t i = 0; i < len; ++i) {
        std::vector<double> v;
        for (const auto& s : series) v.push_back(s[i].normalized);
        EntropySample sample = series.front()[i];
        sample.normalized = median(v);
        curve.samples.push_back(sample);
      }
      curves.push_back(std::move(curve));
    }
    fs::create_directories(c.out_dir);
    write_text(c.out_dir / "delay_vs_n.svg", delay);
    write_text(c.out_dir / "entropy_vs_time.svg", render_entropy_plot(curves));
    return 0;
  }

  const EventLog log = load_event_log(input);
  std::vector<std::int64_t> steps = f.at_steps;
  if (steps.empty()) {
    if (c.at_step) steps.push_back(*c.at_step);
    else if (!log.records.empty()) steps.push_back(log.records.back().step);
  }
  std::vector<std::pair<fs::path, std::string>> frames;
  for (std::int64_t s : steps)
    frames.emplace_back(c.out_dir / (input.stem().string() + "_step" + std::to_string(s) + ".svg"),
                        render_frame(log, s));
  fs::create_directories(c.out_dir);
  for (const auto& [path, svg] : frames) write_text(path, svg);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Beacon/forager swarm simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", SWARM_VERSION);
  Flags flags;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", flags.config, "YAML config file")->check(CLI::ExistingFile);
    sub->add_option("--out", flags.out, "Output directory");
  };
  auto sim = [&](CLI::App* sub) {
    sub->add_option("--seed", flags.seed, "RNG seed");
    sub->add_option("--scenario", flags.scenario, "empty | central-obstacle | c-shape");
    sub->add_option("--n", flags.n, "Swarm size")->check(CLI::PositiveNumber);
    sub->add_option("--extension", flags.extension, "Moving beacons")->check(CLI::IsMember({"on", "off"}));
  };

  CLI::App* run_cmd = app.add_subcommand("run", "Run one simulation and write its event log");
  common(run_cmd);
  sim(run_cmd);
  run_cmd->add_option("--window", flags.window, "Metrics window T0:T1 in seconds");

  CLI::App* batch_cmd = app.add_subcommand("batch", "Run a size x seed x scenario sweep");
  common(batch_cmd);
  sim(batch_cmd);
  batch_cmd->add_option("--jobs", flags.jobs, "Parallel runs")->check(CLI::PositiveNumber);

  CLI::App* metrics_cmd = app.add_subcommand("metrics", "Recompute metrics from event logs");
  common(metrics_cmd);
  metrics_cmd->add_option("logs", flags.inputs, "Event log files")->required();
  metrics_cmd->add_option("--window", flags.window, "Window T0:T1 in seconds (default [t_conv, T])");

  CLI::App* render_cmd = app.add_subcommand("render", "Render frames from a log or plots from a CSV");
  common(render_cmd);
  render_cmd->add_option("input", flags.inputs, "Event log, or metrics CSV with --plots")->required();
  render_cmd->add_option("--at-step", flags.at_steps, "Step(s) to render");
  render_cmd->add_flag("--plots", flags.plots, "Render summary plots from a sweep CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(flags);
    if (batch_cmd->parsed()) return cmd_batch(flags);
    if (metrics_cmd->parsed()) return cmd_metrics(flags);
    if (render_cmd->parsed()) return cmd_render(flags);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kUsageError;
}
