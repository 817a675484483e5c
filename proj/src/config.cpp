#include "swarm/config.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>
#include <yaml-cpp/yaml.h>

#include "swarm/error.hpp"
#include "swarm/event_log.hpp"

namespace swarm {

Arena scenario_arena(std::string_view name) {
  Arena a;
  if (name == "empty") return a;
  if (name == "central-obstacle") {
    a.obstacles.push_back({Rect{{0.65, 1.35}, {1.85, 1.65}}});
    return a;
  }
  if (name == "c-shape") {
    // A cup around the target, open on the far side from the nest.
    a.target = {{1.25, 2.2}, 0.3};
    a.obstacles.push_back({Rect{{0.7, 1.7}, {1.8, 1.8}}});
    a.obstacles.push_back({Rect{{0.7, 1.8}, {0.8, 2.75}}});
    a.obstacles.push_back({Rect{{1.7, 1.8}, {1.8, 2.75}}});
    return a;
  }
  throw Error("unknown scenario '" + std::string(name) + "'");
}

std::vector<std::string> scenario_names() { return {"empty", "central-obstacle", "c-shape"}; }

const char* to_string(Source source) {
  switch (source) {
    case Source::Default: return "default";
    case Source::File: return "file";
    case Source::Flag: return "flag";
  }
  return "?";
}

namespace {

class Reader {
 public:
  Reader(std::string_view origin, RunConfig& config) : origin_(origin), config_(config) {}

  [[noreturn]] void fail(const YAML::Mark& mark, const std::string& what) const {
    std::ostringstream os;
    os << origin_;
    if (mark.line >= 0) os << ':' << mark.line + 1 << ':' << mark.column + 1;
    os << ": " << what;
    throw Error(os.str());
  }
  [[noreturn]] void fail(const YAML::Node& node, const std::string& what) const {
    fail(node.Mark(), what);
  }

  template <typename T>
  T get(const YAML::Node& node, const std::string& key, const char* kind) const {
    if (!node.IsScalar()) fail(node, key + ": expected " + kind);
    try {
      return node.as<T>();
    } catch (const YAML::Exception&) {
      fail(node, key + ": expected " + kind + ", got '" + node.Scalar() + "'");
    }
  }
  double number(const YAML::Node& n, const std::string& key) const { return get<double>(n, key, "a number"); }
  int integer(const YAML::Node& n, const std::string& key) const { return get<int>(n, key, "an integer"); }
  bool boolean(const YAML::Node& n, const std::string& key) const { return get<bool>(n, key, "true or false"); }

  Vec2 point(const YAML::Node& n, const std::string& key) const {
    if (!n.IsSequence() || n.size() != 2) fail(n, key + ": expected [x, y]");
    return {number(n[0], key), number(n[1], key)};
  }

  Disc disc(const YAML::Node& n, const std::string& key) const {
    require_map(n, key);
    Disc d;
    bool has_center = false, has_radius = false;
    for (const auto& kv : n) {
      const std::string k = kv.first.as<std::string>();
      if (k == "center") {
        d.center = point(kv.second, key + ".center");
        has_center = true;
      } else if (k == "radius") {
        d.radius = number(kv.second, key + ".radius");
        has_radius = true;
      } else {
        fail(kv.first, "unknown key '" + key + "." + k + "'");
      }
    }
    if (!has_center || !has_radius) fail(n, key + ": needs center and radius");
    return d;
  }

  void require_map(const YAML::Node& n, const std::string& key) const {
    if (!n.IsMap()) fail(n, key + ": expected a mapping");
  }

  void mark(const std::string& key) { config_.sources[key] = Source::File; }

  void params(const YAML::Node& n) {
    require_map(n, "params");
    SimParams& p = config_.params;
    for (const auto& kv : n) {
      const std::string k = kv.first.as<std::string>();
      const std::string key = "params." + k;
      const YAML::Node& v = kv.second;
      if (k == "rho") p.rho = number(v, key);
      else if (k == "lambda") p.lambda = number(v, key);
      else if (k == "reward_r") p.reward_r = number(v, key);
      else if (k == "epsilon") p.epsilon = number(v, key);
      else if (k == "tau_s") p.tau_s = number(v, key);
      else if (k == "delta_m") p.delta_m = number(v, key);
      else if (k == "v0_mps") p.v0_mps = number(v, key);
      else if (k == "sigma2") p.sigma2 = number(v, key);
      else if (k == "max_signals") p.max_signals = integer(v, key);
      else if (k == "n_agents") p.n_agents = integer(v, key);
      else if (k == "horizon_steps") p.horizon_steps = integer(v, key);
      else if (k == "batch_size") p.batch_size = integer(v, key);
      else if (k == "batch_interval_steps") p.batch_interval_steps = integer(v, key);
      else if (k == "collision_trigger_m") p.collision_trigger_m = number(v, key);
      else if (k == "robot_radius_m") p.robot_radius_m = number(v, key);
      else if (k == "seed") p.seed = get<std::uint64_t>(v, key, "a non-negative integer");
      else if (k == "point_mass") p.point_mass = boolean(v, key);
      else fail(kv.first, "unknown key '" + key + "'");
      mark(key);
    }
  }

  void arena(const YAML::Node& n) {
    require_map(n, "arena");
    Arena& a = config_.arena;
    for (const auto& kv : n) {
      const std::string k = kv.first.as<std::string>();
      const std::string key = "arena." + k;
      const YAML::Node& v = kv.second;
      if (k == "width_m") a.width = number(v, key);
      else if (k == "height_m") a.height = number(v, key);
      else if (k == "nest") a.nest = disc(v, key);
      else if (k == "target") a.target = disc(v, key);
      else if (k == "obstacles") a.obstacles = obstacles(v);
      else fail(kv.first, "unknown key '" + key + "'");
      mark(key);
    }
  }

  std::vector<Obstacle> obstacles(const YAML::Node& n) const {
    if (!n.IsSequence()) fail(n, "arena.obstacles: expected a list");
    std::vector<Obstacle> out;
    for (const auto& item : n) {
      if (!item.IsMap() || item.size() != 1) fail(item, "arena.obstacles: expected {rect: ...} or {disc: ...}");
      const auto kv = *item.begin();
      const std::string k = kv.first.as<std::string>();
      if (k == "disc") {
        out.push_back({disc(kv.second, "arena.obstacles.disc")});
      } else if (k == "rect") {
        const YAML::Node& r = kv.second;
        require_map(r, "arena.obstacles.rect");
        if (!r["min"] || !r["max"] || r.size() != 2) fail(r, "arena.obstacles.rect: needs exactly min and max");
        out.push_back({Rect{point(r["min"], "arena.obstacles.rect.min"),
                            point(r["max"], "arena.obstacles.rect.max")}});
      } else {
        fail(kv.first, "unknown obstacle kind '" + k + "'");
      }
    }
    return out;
  }

  void extensions(const YAML::Node& n) {
    require_map(n, "extensions");
    ExtensionParams& e = config_.extensions;
    for (const auto& kv : n) {
      const std::string k = kv.first.as<std::string>();
      const std::string key = "extensions." + k;
      const YAML::Node& v = kv.second;
      if (k == "enabled") e.enabled = boolean(v, key);
      else if (k == "stale_weight_threshold") e.stale_weight_threshold = number(v, key);
      else if (k == "stale_steps_threshold") e.stale_steps_threshold = integer(v, key);
      else if (k == "kp") e.kp = number(v, key);
      else fail(kv.first, "unknown key '" + key + "'");
      mark(key);
    }
  }

  void output(const YAML::Node& n) {
    require_map(n, "output");
    for (const auto& kv : n) {
      const std::string k = kv.first.as<std::string>();
      const std::string key = "output." + k;
      if (k == "dir") config_.out_dir = get<std::string>(kv.second, key, "a path");
      else if (k == "snapshot_every") config_.snapshot_every = integer(kv.second, key);
      else fail(kv.first, "unknown key '" + key + "'");
      mark(key);
    }
  }

  void render(const YAML::Node& n) {
    require_map(n, "render");
    for (const auto& kv : n) {
      const std::string k = kv.first.as<std::string>();
      const std::string key = "render." + k;
      if (k == "at_step") config_.at_step = get<std::int64_t>(kv.second, key, "an integer");
      else if (k == "plots") config_.plots = boolean(kv.second, key);
      else fail(kv.first, "unknown key '" + key + "'");
      mark(key);
    }
  }

  void metrics(const YAML::Node& n) {
    require_map(n, "metrics");
    for (const auto& kv : n) {
      const std::string k = kv.first.as<std::string>();
      const std::string key = "metrics." + k;
      if (k == "window") {
        if (kv.second.IsNull()) {
          config_.window.reset();
        } else {
          const Vec2 w = point(kv.second, key);
          config_.window = Window{w.x, w.y};
        }
      } else {
        fail(kv.first, "unknown key '" + key + "'");
      }
      mark(key);
    }
  }

  // Top level of a run config. Returns the `sweep` node, if any.
  YAML::Node top(const YAML::Node& root) {
    YAML::Node sweep;
    if (!root || root.IsNull()) return sweep;
    require_map(root, "config");
    // The scenario picks the base arena; `arena` keys then refine it.
    if (const YAML::Node s = root["scenario"]) {
      config_.scenario = get<std::string>(s, "scenario", "a scenario name");
      try {
        config_.arena = scenario_arena(config_.scenario);
      } catch (const Error& e) {
        fail(s, e.what());
      }
      mark("scenario");
    }
    for (const auto& kv : root) {
      const std::string k = kv.first.as<std::string>();
      if (k == "scenario") continue;
      if (k == "params") params(kv.second);
      else if (k == "arena") arena(kv.second);
      else if (k == "extensions") extensions(kv.second);
      else if (k == "output") output(kv.second);
      else if (k == "render") render(kv.second);
      else if (k == "metrics") metrics(kv.second);
      else if (k == "sweep") sweep = kv.second;
      else fail(kv.first, "unknown key '" + k + "'");
    }
    return sweep;
  }

 private:
  std::string origin_;
  RunConfig& config_;
};

YAML::Node parse_yaml(std::string_view text, std::string_view origin) {
  try {
    return YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    std::ostringstream os;
    os << origin << ':' << e.mark.line + 1 << ':' << e.mark.column + 1 << ": " << e.msg;
    throw Error(os.str());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

const char* const kKeys[] = {
    "scenario",
    "params.rho", "params.lambda", "params.reward_r", "params.epsilon", "params.tau_s",
    "params.delta_m", "params.v0_mps", "params.sigma2", "params.max_signals",
    "params.n_agents", "params.horizon_steps", "params.batch_size",
    "params.batch_interval_steps", "params.collision_trigger_m", "params.robot_radius_m",
    "params.seed", "params.point_mass",
    "arena.width_m", "arena.height_m", "arena.nest", "arena.target", "arena.obstacles",
    "extensions.enabled", "extensions.stale_weight_threshold",
    "extensions.stale_steps_threshold", "extensions.kp",
    "output.dir", "output.snapshot_every",
    "render.at_step", "render.plots", "metrics.window"};

}  // namespace

RunConfig default_run_config() {
  RunConfig c;
  for (const char* key : kKeys) c.sources[key] = Source::Default;
  return c;
}

RunConfig parse_run_config(std::string_view text, std::string_view origin) {
  return parse_sweep_config(text, origin).base;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  return parse_run_config(read_file(path), path.string());
}

SweepConfig parse_sweep_config(std::string_view text, std::string_view origin) {
  SweepConfig sweep;
  sweep.base = default_run_config();
  Reader reader(origin, sweep.base);
  const YAML::Node node = reader.top(parse_yaml(text, origin));
  if (!node || node.IsNull()) return sweep;
  reader.require_map(node, "sweep");
  for (const auto& kv : node) {
    const std::string k = kv.first.as<std::string>();
    const YAML::Node& v = kv.second;
    if (k == "sizes") {
      if (!v.IsSequence()) reader.fail(v, "sweep.sizes: expected a list");
      sweep.sizes.clear();
      for (const auto& s : v) sweep.sizes.push_back(reader.integer(s, "sweep.sizes"));
    } else if (k == "seeds") {
      // Either a count (seeds 1..n) or an explicit list.
      sweep.seeds.clear();
      if (v.IsSequence()) {
        for (const auto& s : v)
          sweep.seeds.push_back(reader.get<std::uint64_t>(s, "sweep.seeds", "a non-negative integer"));
      } else {
        const int n = reader.integer(v, "sweep.seeds");
        if (n < 1) reader.fail(v, "sweep.seeds: must be at least 1");
        for (int i = 1; i <= n; ++i) sweep.seeds.push_back(static_cast<std::uint64_t>(i));
      }
    } else if (k == "scenarios") {
      if (!v.IsSequence()) reader.fail(v, "sweep.scenarios: expected a list");
      sweep.scenarios.clear();
      for (const auto& s : v) {
        const auto name = reader.get<std::string>(s, "sweep.scenarios", "a scenario name");
        try {
          scenario_arena(name);
        } catch (const Error& e) {
          reader.fail(s, e.what());
        }
        sweep.scenarios.push_back(name);
      }
    } else if (k == "jobs") {
      sweep.jobs = reader.integer(v, "sweep.jobs");
    } else if (k == "snapshot_every") {
      sweep.snapshot_every = reader.integer(v, "sweep.snapshot_every");
    } else {
      reader.fail(kv.first, "unknown key 'sweep." + k + "'");
    }
  }
  try {
    sweep.validate();
  } catch (const Error& e) {
    reader.fail(node, e.what());
  }
  return sweep;
}

SweepConfig load_sweep_config(const std::filesystem::path& path) {
  return parse_sweep_config(read_file(path), path.string());
}

void SweepConfig::validate() const {
  if (sizes.empty()) throw Error("sweep.sizes: must not be empty");
  if (seeds.empty()) throw Error("sweep.seeds: must not be empty");
  if (scenarios.empty()) throw Error("sweep.scenarios: must not be empty");
  for (int n : sizes)
    if (n < 1) throw Error("sweep.sizes: every size must be at least 1");
  if (jobs < 1) throw Error("sweep.jobs: must be at least 1");
  if (snapshot_every < 1) throw Error("sweep.snapshot_every: must be at least 1");
}

void apply_overrides(RunConfig& c, const Overrides& o) {
  auto flag = [&](const char* key) { c.sources[key] = Source::Flag; };
  if (o.scenario) {
    c.scenario = *o.scenario;
    c.arena = scenario_arena(*o.scenario);
    flag("scenario");
    for (const char* key : {"arena.width_m", "arena.height_m", "arena.nest", "arena.target", "arena.obstacles"})
      flag(key);
  }
  if (o.seed) {
    c.params.seed = *o.seed;
    flag("params.seed");
  }
  if (o.n_agents) {
    c.params.n_agents = *o.n_agents;
    flag("params.n_agents");
  }
  if (o.out_dir) {
    c.out_dir = *o.out_dir;
    flag("output.dir");
  }
  if (o.extension) {
    c.extensions.enabled = *o.extension;
    flag("extensions.enabled");
  }
  if (o.at_step) {
    c.at_step = *o.at_step;
    flag("render.at_step");
  }
  if (o.plots) {
    c.plots = *o.plots;
    flag("render.plots");
  }
  if (o.window) {
    c.window = *o.window;
    flag("metrics.window");
  }
}

void apply_overrides(SweepConfig& c, const Overrides& o) {
  apply_overrides(c.base, o);
  if (o.seed) c.seeds = {*o.seed};
  if (o.n_agents) c.sizes = {*o.n_agents};
  if (o.scenario) c.scenarios = {*o.scenario};
}

std::vector<std::string> validate(const RunConfig& c) {
  c.arena.validate();
  c.extensions.validate();
  if (c.snapshot_every < 1) throw Error("output.snapshot_every: must be at least 1");
  if (c.window && !(c.window->t0 < c.window->t1)) throw Error("metrics.window: need t0 < t1");
  if (c.at_step && *c.at_step < 0) throw Error("render.at_step: must be non-negative");
  return validate_params(c.params, c.arena);
}

std::string describe(const RunConfig& c) {
  using nlohmann::json;
  const json params = to_json(c.params);
  const auto disc = [](const Disc& d) {
    return json{{"center", {d.center.x, d.center.y}}, {"radius", d.radius}};
  };
  std::map<std::string, json> values;
  values["scenario"] = c.scenario;
  for (const auto& [k, v] : params.items()) values["params." + k] = v;
  values["arena.width_m"] = c.arena.width;
  values["arena.height_m"] = c.arena.height;
  values["arena.nest"] = disc(c.arena.nest);
  values["arena.target"] = disc(c.arena.target);
  values["arena.obstacles"] = c.arena.obstacles.size();
  values["extensions.enabled"] = c.extensions.enabled;
  values["extensions.stale_weight_threshold"] = c.extensions.stale_weight_threshold;
  values["extensions.stale_steps_threshold"] = c.extensions.stale_steps_threshold;
  values["extensions.kp"] = c.extensions.kp;
  values["output.dir"] = c.out_dir.string();
  values["output.snapshot_every"] = c.snapshot_every;
  values["render.at_step"] = c.at_step ? json(*c.at_step) : json();
  values["render.plots"] = c.plots;
  values["metrics.window"] = c.window ? json{c.window->t0, c.window->t1} : json();

  std::ostringstream os;
  for (const char* key : kKeys) {
    const auto src = c.sources.find(key);
    os << key << " = " << values.at(key).dump() << " ("
       << to_string(src == c.sources.end() ? Source::Default : src->second) << ")\n";
  }
  return os.str();
}

}  // namespace swarm
