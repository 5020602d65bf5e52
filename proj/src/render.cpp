#include "mra/render.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace mra {

namespace {

const char* action_color(ActionKind k) {
  switch (k) {
    case ActionKind::Pick: return "#4c72b0";
    case ActionKind::Place: return "#55a868";
    case ActionKind::Retract: return "#c44e52";
    case ActionKind::Handover: return "#8172b2";
  }
  return "#999999";
}

std::string fmt(double v) {
  char buf[32];
  snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

std::string render_gantt(const Scene& scene, const PlanState& plan) {
  const double px_per_s = 24.0;
  const double row_h = 26.0, left = 70.0, top = 30.0;
  const double makespan = std::max(1.0, plan.makespan());
  const double width = left + makespan * px_per_s + 20.0;
  const double height = top + row_h * scene.robot_count() + 30.0;

  std::ostringstream svg;
  svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << fmt(width) << "' height='"
      << fmt(height) << "'>\n";
  svg << "<rect width='100%' height='100%' fill='white'/>\n";

  for (int r = 0; r < scene.robot_count(); ++r) {
    const double y = top + r * row_h;
    svg << "<text x='8' y='" << fmt(y + row_h * 0.65) << "' font-size='12'>"
        << scene.robots[static_cast<size_t>(r)].id << "</text>\n";
    for (const Event& ev : plan.events[static_cast<size_t>(r)]) {
      const double x0 = left + ev.start * px_per_s;
      const double bw = std::max(1.0, (ev.end - ev.start) * px_per_s);
      svg << "<rect class='bar " << action_name(ev.kind) << "' x='" << fmt(x0) << "' y='"
          << fmt(y + 3) << "' width='" << fmt(bw) << "' height='" << fmt(row_h - 6)
          << "' fill='" << action_color(ev.kind) << "'>"
          << "<title>" << action_name(ev.kind) << " "
          << scene.objects[static_cast<size_t>(ev.object)].id << "</title></rect>\n";
    }
  }

  // vertical links between the giver and receiver rows of each handover
  for (int r = 0; r < scene.robot_count(); ++r) {
    for (const Event& ev : plan.events[static_cast<size_t>(r)]) {
      if (ev.kind != ActionKind::Handover || ev.partner < r) continue;
      const double x = left + ev.end * px_per_s;
      const double y0 = top + r * row_h + row_h / 2;
      const double y1 = top + ev.partner * row_h + row_h / 2;
      svg << "<line class='handover-link' x1='" << fmt(x) << "' y1='" << fmt(y0) << "' x2='"
          << fmt(x) << "' y2='" << fmt(y1)
          << "' stroke='#8172b2' stroke-width='2' stroke-dasharray='4 2'/>\n";
    }
  }

  // time axis
  const double axis_y = top + row_h * scene.robot_count() + 12.0;
  svg << "<line x1='" << fmt(left) << "' y1='" << fmt(axis_y) << "' x2='"
      << fmt(left + makespan * px_per_s) << "' y2='" << fmt(axis_y) << "' stroke='black'/>\n";
  const double tick = makespan > 60.0 ? 20.0 : 5.0;
  for (double t = 0.0; t <= makespan + 1e-9; t += tick)
    svg << "<text x='" << fmt(left + t * px_per_s) << "' y='" << fmt(axis_y + 12)
        << "' font-size='10' text-anchor='middle'>" << fmt(t) << "</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

std::string render_frame(const Scene& scene, const PlanState& plan, double t) {
  // world bounds from regions and obstacles
  Rect bounds{{1e9, 1e9}, {-1e9, -1e9}};
  auto grow = [&](const Vec2& p) {
    bounds.lo.x = std::min(bounds.lo.x, p.x);
    bounds.lo.y = std::min(bounds.lo.y, p.y);
    bounds.hi.x = std::max(bounds.hi.x, p.x);
    bounds.hi.y = std::max(bounds.hi.y, p.y);
  };
  for (const RobotSpec& r : scene.robots) {
    grow(r.operating_region.lo);
    grow(r.operating_region.hi);
  }
  for (const Rect& r : scene.static_obstacles) {
    grow(r.lo);
    grow(r.hi);
  }
  const double scale = 80.0, pad = 10.0;
  const double width = (bounds.hi.x - bounds.lo.x) * scale + 2 * pad;
  const double height = (bounds.hi.y - bounds.lo.y) * scale + 2 * pad;
  auto X = [&](double x) { return pad + (x - bounds.lo.x) * scale; };
  auto Y = [&](double y) { return height - pad - (y - bounds.lo.y) * scale; };

  std::ostringstream svg;
  svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << fmt(width) << "' height='"
      << fmt(height) << "'>\n<rect width='100%' height='100%' fill='white'/>\n";

  for (const Rect& r : scene.static_obstacles)
    svg << "<rect x='" << fmt(X(r.lo.x)) << "' y='" << fmt(Y(r.hi.y)) << "' width='"
        << fmt(r.width() * scale) << "' height='" << fmt(r.height() * scale)
        << "' fill='#888888'/>\n";

  for (int o = 0; o < scene.object_count(); ++o) {
    const ObjectSpec& spec = scene.objects[static_cast<size_t>(o)];
    const Pose2 p = plan.evaluate(scene, scene.object_entity(o), t).pose;
    svg << "<g transform='translate(" << fmt(X(p.x)) << "," << fmt(Y(p.y)) << ") rotate("
        << fmt(-p.theta * 180.0 / kPi) << ")'>"
        << "<rect x='" << fmt(-spec.width / 2 * scale) << "' y='"
        << fmt(-spec.height / 2 * scale) << "' width='" << fmt(spec.width * scale)
        << "' height='" << fmt(spec.height * scale)
        << "' fill='#6baed6' stroke='#2b5d8a'/></g>\n";
  }

  for (int r = 0; r < scene.robot_count(); ++r) {
    const RobotSpec& spec = scene.robots[static_cast<size_t>(r)];
    const Config c = plan.evaluate(scene, r, t);
    const Vec2 g = spec.gripper_point(c.pose);
    svg << "<circle cx='" << fmt(X(c.pose.x)) << "' cy='" << fmt(Y(c.pose.y)) << "' r='"
        << fmt(spec.base_radius * scale) << "' fill='#d65f5f' stroke='#7a2e2e'/>\n";
    svg << "<line x1='" << fmt(X(c.pose.x)) << "' y1='" << fmt(Y(c.pose.y)) << "' x2='"
        << fmt(X(g.x)) << "' y2='" << fmt(Y(g.y)) << "' stroke='#7a2e2e' stroke-width='2'/>\n";
  }

  svg << "<text x='8' y='14' font-size='12'>t=" << fmt(t) << "s</text>\n</svg>\n";
  return svg.str();
}

int render_to_dir(const Scene& scene, const PlanState& plan, const std::string& out_dir,
                  const std::string& mode, double frame_dt) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  if (mode == "gantt") {
    std::ofstream out(out_dir + "/gantt.svg");
    if (!out) throw std::runtime_error("render: cannot write to " + out_dir);
    out << render_gantt(scene, plan);
    return 1;
  }
  if (mode == "frames") {
    const double makespan = plan.makespan();
    const int frames = static_cast<int>(std::ceil(makespan / frame_dt)) + 1;
    for (int i = 0; i < frames; ++i) {
      char name[32];
      snprintf(name, sizeof(name), "/frame_%04d.svg", i);
      std::ofstream out(out_dir + name);
      if (!out) throw std::runtime_error("render: cannot write to " + out_dir);
      out << render_frame(scene, plan, std::min(makespan, i * frame_dt));
    }
    return frames;
  }
  throw std::invalid_argument("render: unknown mode '" + mode + "'");
}

}  // namespace mra
