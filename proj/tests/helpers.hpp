#pragma once

#include <cmath>

#include "mra/collision.hpp"
#include "mra/scene.hpp"

namespace mra::test {

/// Two-robot sandbox: open 8x8 workspace, one brick, one obstacle slot.
inline Scene sandbox_scene(int robots = 2, bool with_obstacle = false) {
  Scene s;
  ObjectSpec o;
  o.id = "b0";
  o.width = 0.36;
  o.height = 0.16;
  o.start_pose = Pose2(-1.5, 0.0, 0.0);
  o.goal_pose = Pose2(1.5, 0.5, 0.0);
  o.grasp_sites = {{0.18, 0.0}, {-0.18, 0.0}, {0.0, 0.08}, {0.0, -0.08}};
  s.objects.push_back(o);
  for (int i = 0; i < robots; ++i) {
    RobotSpec r;
    r.id = "r" + std::to_string(i);
    r.base_radius = 0.12;
    r.gripper_offset = 0.30;
    r.v_max = 1.0;
    r.omega_max = 4.0;
    r.operating_region = {{-4.0, -4.0}, {4.0, 4.0}};
    r.home_config.pose = Pose2(-3.0 + i * 1.0, -3.0, 0.0);
    s.robots.push_back(r);
  }
  if (with_obstacle) s.static_obstacles.push_back({{-0.3, -2.0}, {0.3, -1.0}});
  s.assembly_edges.emplace_back(kGroundId, "b0");
  return s;
}

/// Dense re-simulation of one robot segment without any inflation; the
/// independent reference for the conservative sweep check.
inline bool fine_dt_segment_free(const CollisionQuery& q, int robot, const Config& from,
                                 double t1, const Config& to, double t2,
                                 const CarriedObjects& carried, double dt = 1e-3) {
  const int steps = std::max(1, static_cast<int>(std::ceil((t2 - t1) / dt)));
  const RobotSpec& spec = q.scene->robots[static_cast<size_t>(robot)];
  const Pose2 grip_from = spec.gripper_pose(from.pose);
  for (int i = 0; i <= steps; ++i) {
    const double u = static_cast<double>(i) / steps;
    Config cfg;
    cfg.pose = lerp_pose(from.pose, to.pose, u);
    cfg.grip = from.grip;
    CarriedObjects carried_now;
    for (const auto& [obj, c] : carried) {
      const Pose2 grasp = grip_from.inverse().compose(c.pose);
      CarriedObject co;
      co.pose = spec.gripper_pose(cfg.pose).compose(grasp);
      co.carrier = c.carrier;
      carried_now[obj] = co;
    }
    MovingRobots moving{{robot, cfg}};
    if (!collision_free(q, moving, carried_now, t1 + (t2 - t1) * u)) return false;
  }
  return true;
}

/// Distance from a point to an axis-aligned rectangle, by dense scan of
/// the boundary; reference for hinge residuals.
inline double point_rect_distance_oracle(const Vec2& p, const Rect& r) {
  if (r.contains(p)) return 0.0;
  double best = 1e300;
  const int n = 4000;
  for (int i = 0; i <= n; ++i) {
    const double u = static_cast<double>(i) / n;
    const Vec2 pts[4] = {{r.lo.x + u * (r.hi.x - r.lo.x), r.lo.y},
                         {r.lo.x + u * (r.hi.x - r.lo.x), r.hi.y},
                         {r.lo.x, r.lo.y + u * (r.hi.y - r.lo.y)},
                         {r.hi.x, r.lo.y + u * (r.hi.y - r.lo.y)}};
    for (const Vec2& q : pts) best = std::min(best, (p - q).norm());
  }
  return best;
}

}  // namespace mra::test
