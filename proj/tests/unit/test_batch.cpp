#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "swarm/batch.hpp"
#include "swarm/error.hpp"
#include "swarm/render.hpp"

using namespace swarm;

namespace {

std::filesystem::path scratch(const char* name) {
  const auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

SweepConfig tiny_sweep() {
  SweepConfig s;
  s.base.params.horizon_steps = 100;
  s.sizes = {20, 30};
  s.seeds = {1, 2};
  s.scenarios = {"empty"};
  return s;
}

}  // namespace

TEST_CASE("median and iqr") {
  CHECK(median({3, 1, 2}) == 2.0);
  CHECK(median({4, 1, 2, 3}) == 2.5);
  CHECK(iqr({1, 2, 3, 4, 5}) == 2.0);
  CHECK(iqr({7}) == 0.0);
  CHECK_THROWS_AS(median({}), Error);
}

TEST_CASE("a sweep writes one row per run plus aggregate and baseline rows") {
  const auto dir = scratch("swarm_batch_count");
  const SweepOutput out = run_sweep(tiny_sweep(), dir);
  REQUIRE(out.rows.size() == 8);
  const std::vector<std::string> types{"run", "run", "aggregate", "baseline", "run", "run", "aggregate", "baseline"};
  for (std::size_t i = 0; i < types.size(); ++i) CHECK(out.rows[i].row_type == types[i]);
  for (const MetricsRow& r : out.rows) {
    CHECK(r.status == "ok");
    if (r.row_type != "run") continue;
    CHECK(std::filesystem::exists(dir / r.log));
    CHECK(std::filesystem::exists(dir / r.entropy_series));
    CHECK(r.delay_foragers_s.has_value());
  }
  CHECK(out.csv == dir / "metrics.csv");
  const auto back = load_csv(out.csv);
  REQUIRE(back.size() == out.rows.size());
  CHECK(back[2].n == 20);
  CHECK(back[2].delay_foragers_iqr_s.has_value());
  CHECK(back[0].seed == 1u);

  // Same configuration, same bytes.
  const auto again = scratch("swarm_batch_count_again");
  run_sweep(tiny_sweep(), again);
  CHECK(slurp(again / "metrics.csv") == slurp(out.csv));
  CHECK(slurp(again / out.rows[0].log) == slurp(dir / out.rows[0].log));

  const auto series = load_entropy_series(dir / out.rows[0].entropy_series);
  CHECK(series.size() == 21);
  std::filesystem::remove_all(dir);
  std::filesystem::remove_all(again);
}

TEST_CASE("a failed run becomes an error row and the sweep goes on") {
  const auto dir = scratch("swarm_batch_error");
  SweepConfig s = tiny_sweep();
  s.sizes = {400, 20};
  s.seeds = {1};
  const SweepOutput out = run_sweep(s, dir);
  REQUIRE(out.rows.size() == 6);
  CHECK(out.rows[0].status.rfind("error: ", 0) == 0);
  CHECK(out.rows[0].status.find("region overcrowded") != std::string::npos);
  CHECK(out.rows[3].status == "ok");
  CHECK(out.rows[3].row_type == "run");
  CHECK(load_csv(out.csv).at(0).status == out.rows[0].status);
  std::filesystem::remove_all(dir);
}

TEST_CASE("csv round trip and version check") {
  MetricsRow r;
  r.scenario = "c-shape";
  r.n = 7;
  r.seed = 3;
  r.status = "error: bad, \"quoted\" value";
  r.delay_all_s = 12.5;
  r.window = Window{1, 2};
  std::stringstream io;
  write_csv(io, {r});
  const auto back = read_csv(io);
  REQUIRE(back.size() == 1);
  CHECK(back[0].status == r.status);
  CHECK(back[0].delay_all_s == 12.5);
  CHECK_FALSE(back[0].t_conv_s);
  CHECK(back[0].window->t1 == 2.0);

  std::string text;
  {
    std::ostringstream os;
    write_csv(os, {r});
    text = os.str();
  }
  const auto line2 = text.find('\n') + 1;
  text.replace(line2, 1, "9");
  std::istringstream bad(text);
  CHECK_THROWS_WITH_AS(read_csv(bad), "csv schema version mismatch: file has version 9, this build reads version 1", Error);
}

TEST_CASE("a run that ends with only beacons has no forager delay") {
  SimParams p;
  p.n_agents = 12;
  p.horizon_steps = 80;
  const EventLog log = run(p, Arena{});
  for (const auto& a : log.final_snapshot().agents) REQUIRE(a.mode == AgentMode::Beacon);
  const MetricsRow r = metrics_row(log);
  CHECK(r.status == "ok");
  CHECK_FALSE(r.delay_foragers_s);
  CHECK(r.delay_all_s.has_value());
}

TEST_CASE("a run with no completed trip") {
  SimParams p;
  p.n_agents = 6;
  p.horizon_steps = 10;
  const MetricsRow r = metrics_row(run(p, Arena{}));
  CHECK_FALSE(r.t_conv_s);
  CHECK(r.window->t0 == 0.0);
  CHECK(r.censored_fraction == 1.0);
}

TEST_CASE("render") {
  SimParams p;
  p.n_agents = 15;
  p.horizon_steps = 30;
  const EventLog log = run(p, Arena{}, {}, RunOptions{10});
  const std::string svg = render_frame(log, 25);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK_THROWS_WITH_AS(render_frame(log, 31), "step out of range: 31 not in [0, 30]", Error);
  CHECK_THROWS_WITH_AS(render_frame(EventLog{}, 0), "no records", Error);
  CHECK_THROWS_WITH_AS(render_delay_plot({}), "no aggregate rows to plot", Error);
}
