#include "mra/verifier.hpp"

#include <cmath>

#include "mra/collision.hpp"

namespace mra {

namespace {

struct Shape {
  bool is_disc = true;
  Vec2 center;
  double radius = 0.0;
  OrientedBox box;
  int carrier = -1;
};

double separation(const Shape& a, const Shape& b) {
  if (a.is_disc && b.is_disc)
    return separation_disc_disc(a.center, a.radius, b.center, b.radius);
  if (a.is_disc) return separation_disc_box(a.center, a.radius, b.box);
  if (b.is_disc) return separation_disc_box(b.center, b.radius, a.box);
  return separation_box_box(a.box, b.box);
}

struct Checker {
  const Scene& scene;
  const PlanState& plan;
  VerifyReport& report;
  std::vector<Shape> shapes;  // one per entity, for the current sample time

  void add(const std::string& kind, const std::string& detail, double t) {
    if (report.findings.size() < 200) report.findings.push_back({kind, detail, t});
  }

  void load_shapes(double t) {
    shapes.resize(static_cast<size_t>(scene.entity_count()));
    for (int e = 0; e < scene.entity_count(); ++e) {
      Shape s;
      const Config cfg = plan.evaluate(scene, e, t);
      if (scene.is_robot(e)) {
        s.is_disc = true;
        s.center = cfg.pose.position();
        s.radius = scene.robots[static_cast<size_t>(e)].base_radius;
      } else {
        const int oi = scene.object_index(e);
        s.is_disc = false;
        s.box = scene.objects[static_cast<size_t>(oi)].box_at(cfg.pose);
        s.center = s.box.center;
        s.carrier = plan.carrier_of(scene, oi, t);
      }
      shapes[static_cast<size_t>(e)] = s;
    }
  }

  // Checks every pair with at least one entity from `movers`; the
  // `is_mover` mask prevents double-counting mover/mover pairs.
  void check_at(double t, const std::vector<int>& movers, const std::vector<char>& is_mover) {
    load_shapes(t);
    for (int a : movers) {
      const Shape& sa = shapes[static_cast<size_t>(a)];
      for (int b = 0; b < scene.entity_count(); ++b) {
        if (b == a) continue;
        if (is_mover[static_cast<size_t>(b)] && b < a) continue;
        const Shape& sb = shapes[static_cast<size_t>(b)];
        if (sa.carrier == b || sb.carrier == a) continue;
        if (separation(sa, sb) < -1e-9)
          add("collision", scene.entity_id(a) + "/" + scene.entity_id(b), t);
      }
      for (const Rect& r : scene.static_obstacles) {
        Shape sr;
        sr.is_disc = false;
        sr.box = OrientedBox::from_rect(r);
        if (separation(sa, sr) < -1e-9)
          add("collision", scene.entity_id(a) + "/static", t);
      }
      if (scene.is_robot(a) &&
          !scene.robots[static_cast<size_t>(a)].operating_region.contains(sa.center))
        add("region", scene.entity_id(a), t);
    }
  }
};

}  // namespace

std::string VerifyReport::summary() const {
  if (findings.empty()) return "ok";
  std::string s = std::to_string(findings.size()) + " finding(s)";
  for (size_t i = 0; i < findings.size() && i < 10; ++i)
    s += "\n  [" + findings[i].kind + "] t=" + std::to_string(findings[i].t) + " " +
         findings[i].detail;
  return s;
}

VerifyReport verify_plan(const Scene& scene, const PlanState& plan, double dt,
                         double angle_weight, double final_pose_tol) {
  VerifyReport report;
  Checker chk{scene, plan, report, {}};

  // Path structure, speed and angular-rate bounds.
  for (int e = 0; e < scene.entity_count(); ++e) {
    const TimedPath& path = plan.committed[static_cast<size_t>(e)];
    for (size_t i = 1; i < path.knots.size(); ++i) {
      if (path.knots[i].t <= path.knots[i - 1].t) {
        chk.add("knots", scene.entity_id(e) + ": non-increasing knot time", path.knots[i].t);
        break;
      }
    }
    if (!scene.is_robot(e)) continue;
    const RobotSpec& spec = scene.robots[static_cast<size_t>(e)];
    for (size_t i = 1; i < path.knots.size(); ++i) {
      const double seg_dt = path.knots[i].t - path.knots[i - 1].t;
      if (seg_dt <= 0.0) continue;
      const double dx = path.knots[i].pose.x - path.knots[i - 1].pose.x;
      const double dy = path.knots[i].pose.y - path.knots[i - 1].pose.y;
      const double dth = wrap_angle(path.knots[i].pose.theta - path.knots[i - 1].pose.theta);
      const double d =
          std::sqrt(dx * dx + dy * dy + angle_weight * angle_weight * dth * dth);
      if (d / seg_dt > spec.v_max + 1e-9)
        chk.add("speed", scene.entity_id(e), path.knots[i].t);
      if (std::abs(dth) / seg_dt > spec.omega_max + 1e-9)
        chk.add("speed", scene.entity_id(e) + " (angular)", path.knots[i].t);
    }
  }

  // Grasp consistency at the boundary knots of every attached range.
  for (int o = 0; o < scene.object_count(); ++o) {
    const int e = scene.object_entity(o);
    const TimedPath& path = plan.committed[static_cast<size_t>(e)];
    for (const Attachment& att : path.attachments) {
      for (int k : {att.first_knot, att.last_knot}) {
        const Knot& knot = path.knots[static_cast<size_t>(k)];
        const Config carrier = plan.evaluate(scene, att.robot, knot.t);
        const Pose2 expect = scene.robots[static_cast<size_t>(att.robot)]
                                 .gripper_pose(carrier.pose)
                                 .compose(att.grasp);
        const double err = std::hypot(expect.x - knot.pose.x, expect.y - knot.pose.y) +
                           std::abs(wrap_angle(expect.theta - knot.pose.theta));
        if (err > 1e-6) chk.add("grasp", scene.entity_id(e), knot.t);
      }
    }
  }

  // Final object poses.
  const double makespan = plan.makespan();
  for (int o : plan.placed) {
    const ObjectSpec& spec = scene.objects[static_cast<size_t>(o)];
    const Pose2 at = plan.evaluate(scene, scene.object_entity(o), makespan + 1.0).pose;
    const double err = std::hypot(at.x - spec.goal_pose.x, at.y - spec.goal_pose.y) +
                       std::abs(wrap_angle(at.theta - spec.goal_pose.theta));
    if (err > final_pose_tol)
      chk.add("final_pose", spec.id + " off by " + std::to_string(err), makespan);
  }

  // Events: ordered and non-overlapping per robot.
  for (int r = 0; r < scene.robot_count(); ++r) {
    const auto& evs = plan.events[static_cast<size_t>(r)];
    for (size_t i = 0; i < evs.size(); ++i) {
      if (evs[i].end < evs[i].start - 1e-9)
        chk.add("events", scene.entity_id(r) + ": negative duration", evs[i].start);
      if (i > 0 && evs[i].start < evs[i - 1].end - 1e-9)
        chk.add("events", scene.entity_id(r) + ": overlapping events", evs[i].start);
    }
  }

  // Sampled collision sweep: pairs with at least one moving entity per
  // sample, plus full pairwise checks at both ends of the horizon.
  struct Span {
    bool moves = false;
    double t0 = 0.0, t1 = 0.0;
  };
  std::vector<Span> spans(static_cast<size_t>(scene.entity_count()));
  for (int e = 0; e < scene.entity_count(); ++e) {
    const TimedPath& p = plan.committed[static_cast<size_t>(e)];
    if (p.knots.size() >= 2) spans[static_cast<size_t>(e)] = {true, p.start_time(), p.end_time()};
  }

  std::vector<int> everyone;
  std::vector<char> all_mask(static_cast<size_t>(scene.entity_count()), 1);
  for (int e = 0; e < scene.entity_count(); ++e) everyone.push_back(e);
  chk.check_at(0.0, everyone, all_mask);
  chk.check_at(makespan, everyone, all_mask);

  const long steps = static_cast<long>(std::ceil(makespan / std::max(dt, 1e-6)));
  for (long i = 0; i <= steps && report.findings.size() < 200; ++i) {
    const double t = std::min(makespan, static_cast<double>(i) * dt);
    std::vector<int> moving;
    std::vector<char> mask(static_cast<size_t>(scene.entity_count()), 0);
    for (int e = 0; e < scene.entity_count(); ++e) {
      const auto& s = spans[static_cast<size_t>(e)];
      if (s.moves && t >= s.t0 && t <= s.t1) {
        moving.push_back(e);
        mask[static_cast<size_t>(e)] = 1;
      }
    }
    if (moving.empty()) continue;
    chk.check_at(t, moving, mask);
  }

  return report;
}

}  // namespace mra
