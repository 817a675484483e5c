#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "swarm/batch.hpp"
#include "swarm/config.hpp"
#include "swarm/engine.hpp"
#include "swarm/error.hpp"
#include "swarm/event_log.hpp"
#include "swarm/metrics.hpp"
#include "swarm/render.hpp"

namespace py = pybind11;
using namespace swarm;
using nlohmann::json;

namespace {

using Point = std::pair<double, double>;

std::vector<Vec2> to_points(const std::vector<Point>& pts) {
  std::vector<Vec2> out;
  out.reserve(pts.size());
  for (const auto& [x, y] : pts) out.push_back({x, y});
  return out;
}

std::optional<Window> to_window(const std::optional<Point>& w) {
  if (!w) return std::nullopt;
  return Window{w->first, w->second};
}

py::dict delay_dict(const DelayResult& d) {
  py::dict out;
  out["delay_s"] = d.delay_s;
  out["censored_fraction"] = d.censored_fraction;
  out["population"] = d.population;
  return out;
}

py::dict metrics_dict(const RunMetrics& m) {
  py::dict out;
  out["t_conv_s"] = m.t_conv_s ? py::cast(*m.t_conv_s) : py::none();
  out["window"] = py::make_tuple(m.window.t0, m.window.t1);
  out["delay_all"] = delay_dict(m.delay_all);
  out["delay_foragers"] = m.delay_foragers ? py::object(delay_dict(*m.delay_foragers)) : py::none();
  out["lower_bound_s"] = m.lower_bound_s;
  out["final_beacons"] = m.final_beacons;
  out["entropy_in_window"] = m.entropy_in_window;
  py::list series;
  for (const EntropySample& s : m.entropy)
    series.append(py::make_tuple(s.time_s, s.n_foragers, s.entropy, s.normalized));
  out["entropy"] = series;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Beacon/forager swarm simulator core";
  m.attr("__version__") = SWARM_VERSION;
  m.attr("LOG_SCHEMA_VERSION") = kLogSchemaVersion;
  m.attr("CSV_SCHEMA_VERSION") = kCsvSchemaVersion;
  py::register_exception<Error>(m, "SwarmError", PyExc_ValueError);

  m.def("default_params_json", [] { return to_json(SimParams{}).dump(); });
  m.def("default_extension_json", [] { return to_json(ExtensionParams{}).dump(); });
  m.def("scenario_arena_json", [](const std::string& name) { return to_json(scenario_arena(name)).dump(); });
  m.def("scenario_names", &scenario_names);

  py::class_<EventLog>(m, "EventLog")
      .def("__len__", [](const EventLog& log) { return log.records.size(); })
      .def_property_readonly("header_json", [](const EventLog& log) { return header_line(log.header); })
      .def("to_jsonl", &to_jsonl)
      .def("save", [](const EventLog& log, const std::filesystem::path& p) { save_event_log(p, log); })
      .def("snapshot",
           [](const EventLog& log, std::int64_t step) {
             const StepRecord* r = log.snapshot_at_or_before(step);
             if (r == nullptr) throw Error("no snapshot at or before step " + std::to_string(step));
             py::list rows;
             for (const AgentSnapshot& a : r->agents)
               rows.append(py::make_tuple(a.id, a.pos.x, a.pos.y, a.heading, std::string(to_string(a.mode)),
                                          a.released));
             return rows;
           },
           py::arg("step"))
      .def("transitions", [](const EventLog& log) {
        py::list rows;
        for (const StepRecord& r : log.records)
          for (const TransitionEvent& t : r.transitions)
            rows.append(py::make_tuple(r.step, t.id, std::string(to_string(t.from)), std::string(to_string(t.to))));
        return rows;
      });

  m.def(
      "run",
      [](const std::string& params, const std::string& arena, const std::string& ext, int snapshot_every) {
        const SimParams p = params_from_json(json::parse(params));
        const Arena a = arena_from_json(json::parse(arena));
        const ExtensionParams e = extensions_from_json(json::parse(ext));
        py::gil_scoped_release release;
        return run(p, a, e, RunOptions{snapshot_every});
      },
      py::arg("params_json"), py::arg("arena_json"), py::arg("extension_json"), py::arg("snapshot_every") = 1);
  m.def("load_event_log", [](const std::filesystem::path& p) { return load_event_log(p); });
  m.def("parse_event_log", [](const std::string& text) {
    std::istringstream in(text);
    return read_event_log(in);
  });

  m.def(
      "compute_metrics",
      [](const EventLog& log, const std::optional<Point>& window, int every, int draws) {
        return metrics_dict(compute_run_metrics(log, to_window(window), every, draws));
      },
      py::arg("log"), py::arg("window") = py::none(), py::arg("entropy_every_steps") = 5,
      py::arg("normalizer_draws") = 100);
  m.def(
      "single_linkage",
      [](const std::vector<Point>& pts) {
        const auto v = to_points(pts);
        std::vector<std::tuple<double, std::size_t, std::size_t>> out;
        for (const Merge& mg : single_linkage(v).merges) out.emplace_back(mg.height, mg.left_size, mg.right_size);
        return out;
      },
      py::arg("points"));
  m.def(
      "hierarchic_entropy",
      [](const std::vector<Point>& pts, double delta0) {
        const auto v = to_points(pts);
        return hierarchic_entropy(single_linkage(v), delta0);
      },
      py::arg("points"), py::arg("delta0") = 0.04);
  m.def(
      "social_entropy",
      [](const std::vector<std::size_t>& sizes) {
        std::size_t n = 0;
        for (std::size_t s : sizes) n += s;
        return social_entropy(sizes, n);
      },
      py::arg("sizes"));
  m.def(
      "shortest_path_length",
      [](const std::string& arena, double robot_radius, Point p, Point q, double cell) {
        return shortest_path_length(arena_from_json(json::parse(arena)), robot_radius, {p.first, p.second},
                                    {q.first, q.second}, cell);
      },
      py::arg("arena_json"), py::arg("robot_radius"), py::arg("p"), py::arg("q"), py::arg("cell") = 0.01);
  m.def(
      "lower_bound_delay",
      [](const std::string& arena, const std::string& params) {
        return lower_bound_delay(arena_from_json(json::parse(arena)), params_from_json(json::parse(params)));
      },
      py::arg("arena_json"), py::arg("params_json"));
  m.def("render_frame", &render_frame, py::arg("log"), py::arg("step"));
  m.def(
      "load_run_config",
      [](const std::filesystem::path& path) {
        const RunConfig c = load_run_config(path);
        validate(c);
        py::dict out;
        out["scenario"] = c.scenario;
        out["params_json"] = to_json(c.params).dump();
        out["arena_json"] = to_json(c.arena).dump();
        out["extension_json"] = to_json(c.extensions).dump();
        out["snapshot_every"] = c.snapshot_every;
        out["out_dir"] = c.out_dir;
        return out;
      },
      py::arg("path"));
}
