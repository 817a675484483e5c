#include "swarm/render.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "swarm/error.hpp"

namespace swarm {

namespace {

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2"};

struct Svg {
  std::ostringstream os;

  Svg(double w, double h) {
    os.precision(5);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
       << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  }
  std::string finish() {
    os << "</svg>\n";
    return os.str();
  }
  void line(double x1, double y1, double x2, double y2, const char* stroke, double width = 1.0,
            const char* extra = "") {
    os << "<line x1=\"" << x1 << "\" y1=\"" << y1 << "\" x2=\"" << x2 << "\" y2=\"" << y2
       << "\" stroke=\"" << stroke << "\" stroke-width=\"" << width << "\" " << extra << "/>\n";
  }
  void circle(double cx, double cy, double r, const char* fill, const char* stroke = "none",
              double opacity = 1.0) {
    os << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"" << r << "\" fill=\"" << fill
       << "\" stroke=\"" << stroke << "\" opacity=\"" << opacity << "\"/>\n";
  }
  void text(double x, double y, const std::string& s, double size = 12, const char* anchor = "start") {
    os << "<text x=\"" << x << "\" y=\"" << y << "\" font-family=\"sans-serif\" font-size=\"" << size
       << "\" text-anchor=\"" << anchor << "\">" << s << "</text>\n";
  }
  void polyline(const std::vector<std::pair<double, double>>& pts, const char* stroke,
                const char* extra = "") {
    os << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"1.5\" " << extra
       << " points=\"";
    for (const auto& [x, y] : pts) os << x << ',' << y << ' ';
    os << "\"/>\n";
  }
};

std::string num(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

// Plot frame with linear axes; maps data to pixels.
struct Axes {
  double x0, x1, y0, y1;
  double left = 60, top = 30, width = 480, height = 320;

  double px(double x) const { return left + (x - x0) / (x1 - x0) * width; }
  double py(double y) const { return top + height - (y - y0) / (y1 - y0) * height; }

  void draw(Svg& svg, const std::string& xlabel, const std::string& ylabel, const std::string& title) const {
    svg.line(left, top + height, left + width, top + height, "black");
    svg.line(left, top, left, top + height, "black");
    for (int i = 0; i <= 5; ++i) {
      const double xv = x0 + (x1 - x0) * i / 5.0;
      const double yv = y0 + (y1 - y0) * i / 5.0;
      svg.line(px(xv), top + height, px(xv), top + height + 4, "black");
      svg.text(px(xv), top + height + 16, num(xv), 10, "middle");
      svg.line(left - 4, py(yv), left, py(yv), "black");
      svg.text(left - 6, py(yv) + 3, num(yv), 10, "end");
    }
    svg.text(left + width / 2, top + height + 34, xlabel, 12, "middle");
    svg.os << "<text x=\"14\" y=\"" << top + height / 2 << "\" font-family=\"sans-serif\" font-size=\"12\""
           << " text-anchor=\"middle\" transform=\"rotate(-90 14 " << top + height / 2 << ")\">" << ylabel
           << "</text>\n";
    svg.text(left + width / 2, 18, title, 13, "middle");
  }
};

}  // namespace

std::string render_frame(const EventLog& log, std::int64_t step) {
  if (log.records.empty()) throw Error("no records");
  const std::int64_t last = log.records.back().step;
  if (step < 0 || step > last)
    throw Error("step out of range: " + std::to_string(step) + " not in [0, " + std::to_string(last) + "]");
  const StepRecord* rec = log.snapshot_at_or_before(step);
  if (!rec) throw Error("no snapshot at or before step " + std::to_string(step));

  const Arena& arena = log.header.arena;
  const double scale = 200.0;  // px per meter
  const double margin = 20.0;
  const double w = arena.width * scale + 2 * margin;
  const double h = arena.height * scale + 2 * margin + 20;
  auto X = [&](double x) { return margin + x * scale; };
  auto Y = [&](double y) { return margin + 20 + (arena.height - y) * scale; };

  Svg svg(w, h);
  svg.text(margin, 16, "step " + std::to_string(rec->step) + "  t = " + num(log.time_of(rec->step)) + " s", 13);
  svg.os << "<rect x=\"" << X(0) << "\" y=\"" << Y(arena.height) << "\" width=\"" << arena.width * scale
         << "\" height=\"" << arena.height * scale << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (const Obstacle& o : arena.obstacles) {
    if (const auto* r = std::get_if<Rect>(&o.shape)) {
      svg.os << "<rect x=\"" << X(r->min.x) << "\" y=\"" << Y(r->max.y) << "\" width=\""
             << (r->max.x - r->min.x) * scale << "\" height=\"" << (r->max.y - r->min.y) * scale
             << "\" fill=\"#999\"/>\n";
    } else {
      const Disc& d = std::get<Disc>(o.shape);
      svg.circle(X(d.center.x), Y(d.center.y), d.radius * scale, "#999");
    }
  }
  svg.circle(X(arena.nest.center.x), Y(arena.nest.center.y), arena.nest.radius * scale, "none", "#1f77b4");
  svg.text(X(arena.nest.center.x), Y(arena.nest.center.y) + 5, "S", 14, "middle");
  svg.circle(X(arena.target.center.x), Y(arena.target.center.y), arena.target.radius * scale, "none", "#d62728");
  svg.text(X(arena.target.center.x), Y(arena.target.center.y) + 5, "T", 14, "middle");

  double max_w = 0.0;
  for (const AgentSnapshot& a : rec->agents)
    if (a.memory) max_w = std::max(max_w, a.memory->w_f1 + a.memory->w_f2);
  const double robot_px = log.header.params.robot_radius_m * scale;
  const double arrow = 0.15 * scale;  // a unit guide is drawn this long
  for (const AgentSnapshot& a : rec->agents) {
    if (!a.memory) continue;
    const BeaconBroadcast& m = *a.memory;
    const double rel = max_w > 0 ? (m.w_f1 + m.w_f2) / max_w : 0.0;
    svg.circle(X(a.pos.x), Y(a.pos.y), robot_px * (0.5 + 2.5 * std::sqrt(rel)), "black");
    const Vec2 u1 = unit_or_zero(m.u_f1), u2 = unit_or_zero(m.u_f2);
    // Foragers seeking the target follow u_f2, those returning follow u_f1.
    if (u2 != Vec2{})
      svg.line(X(a.pos.x), Y(a.pos.y), X(a.pos.x) + u2.x * arrow, Y(a.pos.y) - u2.y * arrow, "#d62728", 1.0,
               "marker-end=\"url(#head)\"");
    if (u1 != Vec2{})
      svg.line(X(a.pos.x), Y(a.pos.y), X(a.pos.x) + u1.x * arrow, Y(a.pos.y) - u1.y * arrow, "#1f77b4", 1.0,
               "marker-end=\"url(#head)\"");
  }
  for (const AgentSnapshot& a : rec->agents) {
    if (a.memory) continue;
    const char* color = a.mode == AgentMode::SeekTarget ? "#2ca02c" : "#ff7f0e";
    svg.circle(X(a.pos.x), Y(a.pos.y), robot_px, color, "none", a.released ? 1.0 : 0.3);
  }
  svg.os << "<defs><marker id=\"head\" markerWidth=\"6\" markerHeight=\"6\" refX=\"5\" refY=\"3\" "
            "orient=\"auto\"><path d=\"M0,0 L6,3 L0,6 z\" fill=\"context-stroke\"/></marker></defs>\n";
  return svg.finish();
}

std::string render_delay_plot(const std::vector<MetricsRow>& rows) {
  std::map<std::string, std::vector<const MetricsRow*>> agg, base;
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymax = 0.0;
  std::optional<double> lower;
  for (const MetricsRow& r : rows) {
    if (r.status != "ok") continue;
    if (r.row_type == "aggregate" && r.delay_foragers_s) {
      agg[r.scenario].push_back(&r);
      ymax = std::max(ymax, *r.delay_foragers_s + r.delay_foragers_iqr_s.value_or(0.0));
    } else if (r.row_type == "baseline" && r.delay_random_baseline_s) {
      base[r.scenario].push_back(&r);
      ymax = std::max(ymax, *r.delay_random_baseline_s);
    } else {
      continue;
    }
    xmin = std::min(xmin, double(r.n));
    xmax = std::max(xmax, double(r.n));
    if (r.lower_bound_s) lower = lower ? std::min(*lower, *r.lower_bound_s) : *r.lower_bound_s;
  }
  if (agg.empty()) throw Error("no aggregate rows to plot");
  const auto by_n = [](const MetricsRow* a, const MetricsRow* b) { return a->n < b->n; };
  for (auto& [_, v] : agg) std::sort(v.begin(), v.end(), by_n);
  for (auto& [_, v] : base) std::sort(v.begin(), v.end(), by_n);
  if (xmin == xmax) {
    xmin -= 1;
    xmax += 1;
  }
  Axes ax{xmin, xmax, 0.0, ymax * 1.1};
  Svg svg(600, 420);
  ax.draw(svg, "swarm size N", "navigation delay (s)", "forager delay vs swarm size");

  int ci = 0;
  double legend_y = ax.top + 10;
  for (const auto& [scenario, points] : agg) {
    const char* color = kPalette[ci++ % 6];
    std::vector<std::pair<double, double>> line;
    for (const MetricsRow* r : points) {
      const double x = ax.px(r->n), y = ax.py(*r->delay_foragers_s);
      line.emplace_back(x, y);
      const double half = r->delay_foragers_iqr_s.value_or(0.0) / 2;
      svg.line(x, ax.py(*r->delay_foragers_s - half), x, ax.py(*r->delay_foragers_s + half), color);
      svg.circle(x, y, 3, color);
    }
    svg.polyline(line, color);
    svg.text(ax.left + ax.width - 150, legend_y, scenario, 11);
    svg.line(ax.left + ax.width - 170, legend_y - 4, ax.left + ax.width - 155, legend_y - 4, color, 2);
    legend_y += 14;
    if (const auto it = base.find(scenario); it != base.end()) {
      std::vector<std::pair<double, double>> bl;
      for (const MetricsRow* r : it->second) bl.emplace_back(ax.px(r->n), ax.py(*r->delay_random_baseline_s));
      svg.polyline(bl, color, "stroke-dasharray=\"2,3\" opacity=\"0.6\"");
      svg.text(ax.left + ax.width - 150, legend_y, scenario + " random", 11);
      svg.line(ax.left + ax.width - 170, legend_y - 4, ax.left + ax.width - 155, legend_y - 4, color, 2,
               "stroke-dasharray=\"2,3\"");
      legend_y += 14;
    }
  }
  if (lower) {
    svg.line(ax.left, ax.py(*lower), ax.left + ax.width, ax.py(*lower), "black", 1.0,
             "stroke-dasharray=\"6,4\"");
    svg.text(ax.left + 4, ax.py(*lower) - 4, "lower bound " + num(*lower) + " s", 10);
  }
  return svg.finish();
}

std::string render_entropy_plot(const std::vector<EntropyCurve>& curves) {
  double tmax = 0.0, ymax = 1.0;
  for (const EntropyCurve& c : curves)
    for (const EntropySample& s : c.samples) {
      tmax = std::max(tmax, s.time_s);
      ymax = std::max(ymax, s.normalized);
    }
  if (tmax <= 0.0) throw Error("no entropy samples to plot");
  Axes ax{0.0, tmax, 0.0, ymax * 1.05};
  Svg svg(600, 420);
  ax.draw(svg, "time (s)", "normalized forager entropy", "forager entropy over time");
  double legend_y = ax.top + 10;
  int ci = 0;
  for (const EntropyCurve& c : curves) {
    const char* color = kPalette[ci++ % 6];
    std::vector<std::pair<double, double>> pts;
    for (const EntropySample& s : c.samples) pts.emplace_back(ax.px(s.time_s), ax.py(s.normalized));
    svg.polyline(pts, color);
    svg.text(ax.left + ax.width - 150, legend_y, c.label, 11);
    svg.line(ax.left + ax.width - 170, legend_y - 4, ax.left + ax.width - 155, legend_y - 4, color, 2);
    legend_y += 14;
  }
  return svg.finish();
}

}  // namespace swarm
