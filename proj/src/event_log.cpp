#include "swarm/event_log.hpp"

#include <fstream>
#include <sstream>

#include "swarm/error.hpp"

namespace swarm {

using nlohmann::json;

namespace {

json vec(Vec2 v) { return json::array({v.x, v.y}); }
Vec2 vec_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

json disc(const Disc& d) { return {{"center", vec(d.center)}, {"radius", d.radius}}; }
Disc disc_from(const json& j) { return {vec_from(j.at("center")), j.at("radius").get<double>()}; }

}  // namespace

json to_json(const SimParams& p) {
  return {{"rho", p.rho},
          {"lambda", p.lambda},
          {"reward_r", p.reward_r},
          {"epsilon", p.epsilon},
          {"tau_s", p.tau_s},
          {"delta_m", p.delta_m},
          {"v0_mps", p.v0_mps},
          {"sigma2", p.sigma2},
          {"max_signals", p.max_signals},
          {"n_agents", p.n_agents},
          {"horizon_steps", p.horizon_steps},
          {"batch_size", p.batch_size},
          {"batch_interval_steps", p.batch_interval_steps},
          {"collision_trigger_m", p.collision_trigger_m},
          {"robot_radius_m", p.robot_radius_m},
          {"seed", p.seed},
          {"point_mass", p.point_mass}};
}

SimParams params_from_json(const json& j) {
  SimParams p;
  p.rho = j.at("rho").get<double>();
  p.lambda = j.at("lambda").get<double>();
  p.reward_r = j.at("reward_r").get<double>();
  p.epsilon = j.at("epsilon").get<double>();
  p.tau_s = j.at("tau_s").get<double>();
  p.delta_m = j.at("delta_m").get<double>();
  p.v0_mps = j.at("v0_mps").get<double>();
  p.sigma2 = j.at("sigma2").get<double>();
  p.max_signals = j.at("max_signals").get<int>();
  p.n_agents = j.at("n_agents").get<int>();
  p.horizon_steps = j.at("horizon_steps").get<int>();
  p.batch_size = j.at("batch_size").get<int>();
  p.batch_interval_steps = j.at("batch_interval_steps").get<int>();
  p.collision_trigger_m = j.at("collision_trigger_m").get<double>();
  p.robot_radius_m = j.at("robot_radius_m").get<double>();
  p.seed = j.at("seed").get<std::uint64_t>();
  p.point_mass = j.value("point_mass", false);
  return p;
}

json to_json(const Arena& a) {
  json obstacles = json::array();
  for (const Obstacle& o : a.obstacles) {
    if (const auto* d = std::get_if<Disc>(&o.shape)) {
      obstacles.push_back({{"type", "disc"}, {"center", vec(d->center)}, {"radius", d->radius}});
    } else {
      const auto& r = std::get<Rect>(o.shape);
      obstacles.push_back({{"type", "rect"}, {"min", vec(r.min)}, {"max", vec(r.max)}});
    }
  }
  return {{"width", a.width},
          {"height", a.height},
          {"nest", disc(a.nest)},
          {"target", disc(a.target)},
          {"obstacles", obstacles}};
}

Arena arena_from_json(const json& j) {
  Arena a;
  a.width = j.at("width").get<double>();
  a.height = j.at("height").get<double>();
  a.nest = disc_from(j.at("nest"));
  a.target = disc_from(j.at("target"));
  for (const json& o : j.at("obstacles")) {
    if (o.at("type") == "disc") {
      a.obstacles.push_back({Disc{vec_from(o.at("center")), o.at("radius").get<double>()}});
    } else {
      a.obstacles.push_back({Rect{vec_from(o.at("min")), vec_from(o.at("max"))}});
    }
  }
  return a;
}

json to_json(const ExtensionParams& e) {
  return {{"enabled", e.enabled},
          {"stale_weight_threshold", e.stale_weight_threshold},
          {"stale_steps_threshold", e.stale_steps_threshold},
          {"kp", e.kp}};
}

ExtensionParams extensions_from_json(const json& j) {
  ExtensionParams e;
  e.enabled = j.at("enabled").get<bool>();
  e.stale_weight_threshold = j.at("stale_weight_threshold").get<double>();
  e.stale_steps_threshold = j.at("stale_steps_threshold").get<int>();
  e.kp = j.at("kp").get<double>();
  return e;
}

std::string header_line(const LogHeader& h) {
  json j = {{"kind", "header"},
            {"schema", kLogSchemaName},
            {"version", h.schema_version},
            {"rng", h.rng_algorithm},
            {"code_version", h.code_version},
            {"seed", h.params.seed},
            {"snapshot_every", h.snapshot_every},
            {"params", to_json(h.params)},
            {"arena", to_json(h.arena)}};
  if (h.extensions.enabled) j["extensions"] = to_json(h.extensions);
  return j.dump();
}

std::string record_line(const StepRecord& r) {
  json j = {{"kind", "step"}, {"step", r.step}};
  if (r.has_snapshot()) {
    json agents = json::array();
    for (const AgentSnapshot& a : r.agents) {
      json row = {a.id, a.pos.x, a.pos.y, a.heading, to_string(a.mode), a.released ? 1 : 0};
      if (a.memory) {
        const BeaconBroadcast& m = *a.memory;
        for (double v : {m.w_f1, m.w_f2, m.u_f1.x, m.u_f1.y, m.u_f2.x, m.u_f2.y}) row.push_back(v);
      }
      agents.push_back(std::move(row));
    }
    j["agents"] = std::move(agents);
  }
  json transitions = json::array();
  for (const TransitionEvent& t : r.transitions) {
    transitions.push_back({t.id, to_string(t.from), to_string(t.to)});
  }
  j["transitions"] = std::move(transitions);
  if (!r.drift.empty()) {
    json drift = json::array();
    for (const DriftEvent& d : r.drift) drift.push_back({d.id, d.velocity.x, d.velocity.y});
    j["drift"] = std::move(drift);
  }
  j["coverage_gaps"] = r.coverage_gaps;
  return j.dump();
}

void write_event_log(std::ostream& out, const EventLog& log) {
  out << header_line(log.header) << '\n';
  for (const StepRecord& r : log.records) out << record_line(r) << '\n';
}

std::string to_jsonl(const EventLog& log) {
  std::ostringstream out;
  write_event_log(out, log);
  return out.str();
}

EventLog read_event_log(std::istream& in) {
  EventLog log;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  try {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      const json j = json::parse(line);
      if (!have_header) {
        if (j.value("kind", "") != "header" || j.value("schema", "") != kLogSchemaName) {
          throw Error("line 1: not a beacon-swarm event log");
        }
        const int version = j.at("version").get<int>();
        if (version != kLogSchemaVersion) {
          throw Error("schema version mismatch: log has version " + std::to_string(version) +
                      ", this build reads version " + std::to_string(kLogSchemaVersion));
        }
        LogHeader& h = log.header;
        h.schema_version = version;
        h.rng_algorithm = j.at("rng").get<std::string>();
        h.code_version = j.at("code_version").get<std::string>();
        h.snapshot_every = j.at("snapshot_every").get<int>();
        h.params = params_from_json(j.at("params"));
        h.arena = arena_from_json(j.at("arena"));
        if (j.contains("extensions")) h.extensions = extensions_from_json(j.at("extensions"));
        have_header = true;
        continue;
      }
      StepRecord r;
      r.step = j.at("step").get<std::int64_t>();
      if (j.contains("agents")) {
        for (const json& row : j.at("agents")) {
          AgentSnapshot a;
          a.id = row.at(0).get<int>();
          a.pos = {row.at(1).get<double>(), row.at(2).get<double>()};
          a.heading = row.at(3).get<double>();
          a.mode = parse_mode(row.at(4).get<std::string>());
          a.released = row.at(5).get<int>() != 0;
          if (row.size() >= 12) {
            a.memory = BeaconBroadcast{row.at(6).get<double>(), row.at(7).get<double>(),
                                       {row.at(8).get<double>(), row.at(9).get<double>()},
                                       {row.at(10).get<double>(), row.at(11).get<double>()}};
          }
          r.agents.push_back(std::move(a));
        }
      }
      for (const json& t : j.at("transitions")) {
        r.transitions.push_back({t.at(0).get<int>(), parse_mode(t.at(1).get<std::string>()),
                                 parse_mode(t.at(2).get<std::string>())});
      }
      if (j.contains("drift")) {
        for (const json& d : j.at("drift")) {
          r.drift.push_back({d.at(0).get<int>(), {d.at(1).get<double>(), d.at(2).get<double>()}});
        }
      }
      r.coverage_gaps = j.value("coverage_gaps", 0);
      if (!log.records.empty() && r.step != log.records.back().step + 1) {
        throw Error("line " + std::to_string(line_no) + ": step records out of order");
      }
      log.records.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw Error("line " + std::to_string(line_no) + ": " + e.what());
  }
  if (!have_header) throw Error("no records");
  return log;
}

EventLog load_event_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open log " + path.string());
  return read_event_log(in);
}

void save_event_log(const std::filesystem::path& path, const EventLog& log) {
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error("cannot write " + tmp.string());
    write_event_log(out, log);
    if (!out) throw Error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace swarm
