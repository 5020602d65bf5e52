#include "mra/collision.hpp"

#include <cmath>

namespace mra {

namespace {

struct Shape {
  bool is_disc = true;
  Vec2 center;
  double radius = 0.0;
  OrientedBox box;
  int entity = -1;
  int paired_entity = -1;  // carrier/cargo partner, pair is skipped
};

Shape robot_shape(const Scene& scene, int robot, const Pose2& pose, double inflate) {
  Shape s;
  s.is_disc = true;
  s.center = pose.position();
  s.radius = scene.robots[static_cast<size_t>(robot)].base_radius + inflate;
  s.entity = robot;
  return s;
}

Shape object_shape(const Scene& scene, int object_index, const Pose2& pose, double inflate,
                   int carrier) {
  const ObjectSpec& spec = scene.objects[static_cast<size_t>(object_index)];
  Shape s;
  s.is_disc = false;
  s.box = spec.box_at(pose);
  s.box.half.x += inflate;
  s.box.half.y += inflate;
  s.entity = scene.object_entity(object_index);
  s.paired_entity = carrier;
  return s;
}

double separation(const Shape& a, const Shape& b) {
  if (a.is_disc && b.is_disc)
    return separation_disc_disc(a.center, a.radius, b.center, b.radius);
  if (a.is_disc) return separation_disc_box(a.center, a.radius, b.box);
  if (b.is_disc) return separation_disc_box(b.center, b.radius, a.box);
  return separation_box_box(a.box, b.box);
}

bool skip_pair(const Shape& a, const Shape& b) {
  return a.paired_entity == b.entity || b.paired_entity == a.entity;
}

// Gathers moving shapes plus the rest of the world at time t.
struct Snapshot {
  std::vector<Shape> active;
  std::vector<Shape> passive;

  double min_separation(const std::vector<OrientedBox>& statics) const {
    double sep = 1e300;
    for (size_t i = 0; i < active.size(); ++i) {
      for (size_t j = i + 1; j < active.size(); ++j)
        if (!skip_pair(active[i], active[j]))
          sep = std::min(sep, separation(active[i], active[j]));
      for (const Shape& p : passive)
        if (!skip_pair(active[i], p)) sep = std::min(sep, separation(active[i], p));
      for (const OrientedBox& sb : statics) {
        Shape s;
        s.is_disc = false;
        s.box = sb;
        sep = std::min(sep, separation(active[i], s));
      }
    }
    return sep;
  }
};

Snapshot make_snapshot(const CollisionQuery& q, const MovingRobots& moving,
                       const CarriedObjects& carried, double t,
                       const std::vector<double>& entity_inflation) {
  const Scene& scene = *q.scene;
  Snapshot snap;
  for (const auto& [robot, cfg] : moving)
    snap.active.push_back(robot_shape(scene, robot, cfg.pose, 0.0));
  for (const auto& [obj, c] : carried)
    snap.active.push_back(object_shape(scene, obj, c.pose, 0.0, c.carrier));

  for (int e = 0; e < scene.entity_count(); ++e) {
    if (moving.count(e)) continue;
    if (scene.is_object(e) && carried.count(scene.object_index(e))) continue;
    const double inflate = entity_inflation.empty()
                               ? 0.0
                               : entity_inflation[static_cast<size_t>(e)];
    const Config cfg = q.plan->evaluate(scene, e, t);
    if (scene.is_robot(e)) {
      snap.passive.push_back(robot_shape(scene, e, cfg.pose, inflate));
    } else {
      const int oi = scene.object_index(e);
      const int carrier = q.plan->carrier_of(scene, oi, t);
      snap.passive.push_back(object_shape(scene, oi, cfg.pose, inflate, carrier));
    }
  }
  return snap;
}

std::vector<OrientedBox> static_boxes(const Scene& scene, double inflate) {
  std::vector<OrientedBox> out;
  out.reserve(scene.static_obstacles.size());
  for (const Rect& r : scene.static_obstacles) {
    OrientedBox b = OrientedBox::from_rect(r);
    b.half.x += inflate;
    b.half.y += inflate;
    out.push_back(b);
  }
  return out;
}

bool regions_ok(const Scene& scene, const MovingRobots& moving) {
  for (const auto& [robot, cfg] : moving)
    if (!scene.robots[static_cast<size_t>(robot)].operating_region.contains(
            cfg.pose.position()))
      return false;
  return true;
}

// Worst-case displacement rate of any material point rigidly attached to
// the robot at lever arm L, given the weighted config-space speed bound.
double point_speed_bound(const RobotSpec& r, double lever, double angle_weight) {
  return r.v_max * (1.0 + lever / angle_weight);
}

}  // namespace

bool collision_free(const CollisionQuery& q, const MovingRobots& moving,
                    const CarriedObjects& carried, double t) {
  if (!regions_ok(*q.scene, moving)) return false;
  const Snapshot snap = make_snapshot(q, moving, carried, t, {});
  return snap.min_separation(static_boxes(*q.scene, 0.0)) >= 0.0;
}

double world_separation(const CollisionQuery& q, const MovingRobots& moving,
                        const CarriedObjects& carried, double t) {
  const Snapshot snap = make_snapshot(q, moving, carried, t, {});
  return snap.min_separation(static_boxes(*q.scene, 0.0));
}

bool sweep_collision_free(const CollisionQuery& q, int robot, const Config& from, double t1,
                          const Config& to, double t2, const CarriedObjects& carried,
                          const SweepParams& p) {
  const Scene& scene = *q.scene;
  const RobotSpec& spec = scene.robots[static_cast<size_t>(robot)];

  if (t2 <= t1) {
    MovingRobots moving{{robot, from}};
    return collision_free(q, moving, carried, t1);
  }

  const int steps = std::max(1, static_cast<int>(std::ceil((t2 - t1) / p.dt_check)));
  const double dt = (t2 - t1) / steps;

  // Per-entity inflation covering motion between consecutive samples.
  std::vector<double> inflation(static_cast<size_t>(scene.entity_count()), 0.0);
  for (int e = 0; e < scene.entity_count(); ++e) {
    const TimedPath& path = q.plan->committed[static_cast<size_t>(e)];
    if (path.empty() || path.start_time() >= t2 || path.end_time() <= t1) continue;
    if (scene.is_robot(e)) {
      inflation[static_cast<size_t>(e)] =
          scene.robots[static_cast<size_t>(e)].v_max * dt * 0.5;
    } else {
      const ObjectSpec& ospec = scene.objects[static_cast<size_t>(scene.object_index(e))];
      // carried ranges move with the carrier; between-knot motion of a
      // detached object path is bounded by the owning robot too
      double bound = 0.0;
      for (const auto& att : path.attachments) {
        const RobotSpec& carrier = scene.robots[static_cast<size_t>(att.robot)];
        const double lever = carrier.gripper_offset + att.grasp.position().norm() +
                             ospec.box_at(Pose2()).circumradius();
        bound = std::max(bound, point_speed_bound(carrier, lever, q.angle_weight));
      }
      if (bound == 0.0) {
        double vmax = 0.0;
        for (const auto& r : scene.robots) vmax = std::max(vmax, r.v_max);
        bound = vmax * (1.0 + (ospec.box_at(Pose2()).circumradius()) / q.angle_weight);
      }
      inflation[static_cast<size_t>(e)] = bound * dt * 0.5;
    }
  }

  const double mover_inflate = spec.v_max * dt * 0.5;
  double cargo_lever = 0.0;
  for (const auto& [obj, c] : carried) {
    const ObjectSpec& ospec = scene.objects[static_cast<size_t>(obj)];
    cargo_lever = std::max(cargo_lever, spec.gripper_offset +
                                            ospec.box_at(Pose2()).circumradius() +
                                            (c.pose.position() - from.pose.position()).norm());
  }
  const double cargo_inflate =
      point_speed_bound(spec, spec.gripper_offset + cargo_lever, q.angle_weight) * dt * 0.5;

  const auto statics = static_boxes(scene, 0.0);
  const Pose2 gripper_from = spec.gripper_pose(from.pose);

  for (int i = 0; i <= steps; ++i) {
    const double u = static_cast<double>(i) / steps;
    const double ts = t1 + (t2 - t1) * u;
    Config cfg;
    cfg.pose = lerp_pose(from.pose, to.pose, u);
    cfg.grip = from.grip;
    if (!spec.operating_region.contains(cfg.pose.position())) return false;

    MovingRobots moving{{robot, cfg}};
    CarriedObjects cargo_now;
    for (const auto& [obj, c] : carried) {
      // keep the cargo rigid on the gripper while interpolating
      const Pose2 grasp = gripper_from.inverse().compose(c.pose);
      CarriedObject co;
      co.pose = spec.gripper_pose(cfg.pose).compose(grasp);
      co.carrier = c.carrier;
      cargo_now[obj] = co;
    }

    Snapshot snap = make_snapshot(q, moving, cargo_now, ts, inflation);
    for (Shape& s : snap.active) {
      if (s.is_disc)
        s.radius += mover_inflate;
      else {
        s.box.half.x += cargo_inflate;
        s.box.half.y += cargo_inflate;
      }
    }
    if (snap.min_separation(statics) < 0.0) return false;
  }
  return true;
}

}  // namespace mra
