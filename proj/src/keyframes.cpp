#include "mra/keyframes.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace mra {

namespace {

double config_distance(const Pose2& a, const Pose2& b, double w) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double dth = wrap_angle(b.theta - a.theta);
  return std::sqrt(dx * dx + dy * dy + w * w * dth * dth);
}

struct SwitchInfo {
  int action = -1;
  ActionKind kind;
  std::vector<int> robots;  // giver first for handovers
  double t = 0.0;
};

// Per-robot anchor: where and when the robot enters the sub-problem.
struct Anchor {
  Pose2 pose;
  double t = 0.0;
};

// Cached world geometry at one switch time.
struct PassiveShape {
  bool is_disc = true;
  Vec2 center;
  double radius = 0.0;
  OrientedBox box;
  double bound_radius = 0.0;  // broad-phase circle around `center`
  int entity = -1;
  int carrier = -1;
};

struct SwitchWorld {
  std::vector<PassiveShape> shapes;
  double t = 0.0;
};

struct Layout {
  std::vector<SwitchInfo> switches;
  std::map<std::pair<int, int>, int> var_of_robot;  // (action, robot) -> z offset, -1 pinned
  std::map<int, int> var_of_object;                 // action -> z offset, -1 pinned
  int dim = 0;
  int pick_action = -1;
  int place_action = -1;
  std::map<int, Anchor> anchors;                       // robot -> entry state
  std::map<int, std::vector<int>> robot_action_order;  // robot -> its switch actions
  std::vector<SwitchWorld> worlds;                     // per switch
  std::vector<OrientedBox> footprints;                 // future goal boxes
  bool footprint_excludes_self = false;                // self goal handled per switch
  OrientedBox self_goal_box;
};

Layout build_layout(const KeyframeProblem& prob) {
  const Scene& scene = *prob.scene;
  const SubProblem& sub = *prob.sub;
  Layout lay;
  int offset = 0;
  for (size_t i = 0; i < sub.skeleton.actions.size(); ++i) {
    const Action& a = sub.skeleton.actions[i];
    SwitchInfo sw;
    sw.action = static_cast<int>(i);
    sw.kind = a.kind;
    sw.robots = {a.robot};
    if (a.kind == ActionKind::Handover) sw.robots.push_back(a.partner);
    sw.t = prob.times.time_of(static_cast<int>(i));
    for (int r : sw.robots) {
      const auto key = std::make_pair(static_cast<int>(i), r);
      if (prob.pinned_robot.count(key)) {
        lay.var_of_robot[key] = -1;
      } else {
        lay.var_of_robot[key] = offset;
        offset += 3;
      }
      lay.robot_action_order[r].push_back(static_cast<int>(i));
    }
    if (a.kind == ActionKind::Handover) {
      if (prob.pinned_object.count(static_cast<int>(i))) {
        lay.var_of_object[static_cast<int>(i)] = -1;
      } else {
        lay.var_of_object[static_cast<int>(i)] = offset;
        offset += 3;
      }
    }
    if (a.kind == ActionKind::Pick && lay.pick_action < 0) lay.pick_action = static_cast<int>(i);
    if (a.kind == ActionKind::Place) lay.place_action = static_cast<int>(i);
    lay.switches.push_back(sw);
  }
  lay.dim = offset;

  for (int r : sub.robots) {
    Anchor an;
    const Config c = prob.plan->evaluate(scene, r, 1e18);
    an.pose = c.pose;
    an.t = std::max(sub.earliest_free_time, prob.plan->horizon[static_cast<size_t>(r)]);
    lay.anchors[r] = an;
  }

  // Freeze the rest of the world at each switch time.
  const int self_entity = scene.object_entity(sub.object);
  for (const SwitchInfo& sw : lay.switches) {
    SwitchWorld world;
    world.t = sw.t;
    for (int e = 0; e < scene.entity_count(); ++e) {
      if (e == self_entity) continue;
      bool involved = false;
      for (int r : sub.robots) involved |= (e == r);
      if (involved) continue;  // clamped teammates are still obstacles
      const Config cfg = prob.plan->evaluate(scene, e, sw.t);
      PassiveShape ps;
      ps.entity = e;
      if (scene.is_robot(e)) {
        ps.is_disc = true;
        ps.center = cfg.pose.position();
        ps.radius = scene.robots[static_cast<size_t>(e)].base_radius;
        ps.bound_radius = ps.radius;
      } else {
        const int oi = scene.object_index(e);
        ps.is_disc = false;
        ps.box = scene.objects[static_cast<size_t>(oi)].box_at(cfg.pose);
        ps.center = ps.box.center;
        ps.bound_radius = ps.box.circumradius();
        ps.carrier = prob.plan->carrier_of(scene, oi, sw.t);
      }
      world.shapes.push_back(ps);
    }
    for (const Rect& r : scene.static_obstacles) {
      PassiveShape ps;
      ps.is_disc = false;
      ps.box = OrientedBox::from_rect(r);
      ps.center = ps.box.center;
      ps.bound_radius = ps.box.circumradius();
      world.shapes.push_back(ps);
    }
    lay.worlds.push_back(std::move(world));
  }

  for (int o = 0; o < scene.object_count(); ++o) {
    if (prob.plan->is_placed(o) || o == sub.object) continue;
    const ObjectSpec& spec = scene.objects[static_cast<size_t>(o)];
    lay.footprints.push_back(spec.box_at(spec.goal_pose));
  }
  const ObjectSpec& self = scene.objects[static_cast<size_t>(sub.object)];
  lay.self_goal_box = self.box_at(self.goal_pose);
  return lay;
}

struct Candidate {
  std::map<std::pair<int, int>, Pose2> robot_pose;
  std::map<int, Pose2> object_pose;  // handover switches
  std::map<int, int> sites;          // pick/handover action -> site index
};

Candidate unpack(const KeyframeProblem& prob, const Layout& lay, const Eigen::VectorXd& z,
                 const std::map<int, int>& sites) {
  Candidate c;
  c.sites = sites;
  for (const auto& [key, off] : lay.var_of_robot) {
    if (off < 0)
      c.robot_pose[key] = prob.pinned_robot.at(key).pose;
    else
      c.robot_pose[key] = Pose2(z[off], z[off + 1], z[off + 2]);
  }
  for (const auto& [action, off] : lay.var_of_object) {
    if (off < 0)
      c.object_pose[action] = prob.pinned_object.at(action);
    else
      c.object_pose[action] = Pose2(z[off], z[off + 1], z[off + 2]);
  }
  return c;
}

Pose2 rest_pose(const KeyframeProblem& prob) {
  return prob.scene->objects[static_cast<size_t>(prob.sub->object)].start_pose;
}

Pose2 object_pose_at(const KeyframeProblem& prob, const Candidate& c, int action) {
  const Skeleton& sk = prob.sub->skeleton;
  const Action& a = sk.actions[static_cast<size_t>(action)];
  const ObjectSpec& obj = prob.scene->objects[static_cast<size_t>(prob.sub->object)];
  switch (a.kind) {
    case ActionKind::Pick: return rest_pose(prob);
    case ActionKind::Handover: return c.object_pose.at(action);
    case ActionKind::Place:
    case ActionKind::Retract: return obj.goal_pose;
  }
  return obj.goal_pose;
}

Pose2 gripper_pose_of(const Scene& scene, int robot, const Pose2& base) {
  return scene.robots[static_cast<size_t>(robot)].gripper_pose(base);
}

Pose2 grasp_transform_at(const KeyframeProblem& prob, const Candidate& c, int acq) {
  const Skeleton& sk = prob.sub->skeleton;
  const Action& a = sk.actions[static_cast<size_t>(acq)];
  const int new_holder = (a.kind == ActionKind::Handover) ? a.partner : a.robot;
  const Pose2 obj = object_pose_at(prob, c, acq);
  const Pose2 grip =
      gripper_pose_of(*prob.scene, new_holder, c.robot_pose.at({acq, new_holder}));
  return grip.inverse().compose(obj);
}

struct RowBlock {
  ResidualKind kind;
  int action;
  std::vector<double> value;
};

// Full residual stack; `with_cost` appends the switch-displacement rows.
std::vector<RowBlock> residual_blocks(const KeyframeProblem& prob, const Layout& lay,
                                      const Candidate& c, bool with_cost) {
  const Scene& scene = *prob.scene;
  const SubProblem& sub = *prob.sub;
  const Skeleton& sk = sub.skeleton;
  const double w = prob.angle_weight;
  std::vector<RowBlock> rows;

  auto pose_diff = [&](const Pose2& a, const Pose2& b) {
    return std::vector<double>{a.x - b.x, a.y - b.y, w * wrap_angle(a.theta - b.theta)};
  };

  const ObjectSpec& obj = scene.objects[static_cast<size_t>(sub.object)];

  for (const SwitchInfo& sw : lay.switches) {
    const Action& a = sk.actions[static_cast<size_t>(sw.action)];
    if (a.kind == ActionKind::Pick) {
      const Pose2 base = c.robot_pose.at({sw.action, a.robot});
      const Vec2 g = scene.robots[static_cast<size_t>(a.robot)].gripper_point(base);
      const Vec2 s = obj.site_at(rest_pose(prob), c.sites.at(sw.action));
      rows.push_back({ResidualKind::Grasp, sw.action, {g.x - s.x, g.y - s.y}});
    } else if (a.kind == ActionKind::Handover) {
      const int acq = acquisition_action(sk, sw.action, a.robot);
      const Pose2 T = grasp_transform_at(prob, c, acq);
      const Pose2 giver_grip =
          gripper_pose_of(scene, a.robot, c.robot_pose.at({sw.action, a.robot}));
      const Pose2 held = giver_grip.compose(T);
      rows.push_back({ResidualKind::HandoverSync, sw.action,
                      pose_diff(held, c.object_pose.at(sw.action))});
      const Pose2 recv_base = c.robot_pose.at({sw.action, a.partner});
      const Vec2 g = scene.robots[static_cast<size_t>(a.partner)].gripper_point(recv_base);
      const Vec2 s = obj.site_at(c.object_pose.at(sw.action), c.sites.at(sw.action));
      rows.push_back({ResidualKind::Grasp, sw.action, {g.x - s.x, g.y - s.y}});
    } else if (a.kind == ActionKind::Place) {
      const int acq = acquisition_action(sk, sw.action, a.robot);
      const Pose2 T = grasp_transform_at(prob, c, acq);
      const Pose2 grip = gripper_pose_of(scene, a.robot, c.robot_pose.at({sw.action, a.robot}));
      rows.push_back(
          {ResidualKind::PlacementGoal, sw.action, pose_diff(grip.compose(T), obj.goal_pose)});
    }
  }

  // Operating-region hinges.
  const double rm = 1e-3;
  for (const SwitchInfo& sw : lay.switches) {
    for (int r : sw.robots) {
      const Rect& reg = scene.robots[static_cast<size_t>(r)].operating_region;
      const Pose2 base = c.robot_pose.at({sw.action, r});
      rows.push_back({ResidualKind::Region, sw.action,
                      {std::max(0.0, reg.lo.x - base.x + rm), std::max(0.0, base.x - reg.hi.x + rm),
                       std::max(0.0, reg.lo.y - base.y + rm),
                       std::max(0.0, base.y - reg.hi.y + rm)}});
    }
  }

  // Future goal footprints at each robot's final switch, and parking near
  // home after a retract so resting robots do not block the build area.
  for (int r : sub.robots) {
    const auto& order = lay.robot_action_order.at(r);
    if (order.empty()) continue;
    const int last = order.back();
    const Pose2 base = c.robot_pose.at({last, r});
    const double rad = scene.robots[static_cast<size_t>(r)].base_radius;
    std::vector<double> vals;
    for (const OrientedBox& fp : lay.footprints)
      vals.push_back(std::max(
          0.0, prob.clearance_footprint - separation_disc_box(base.position(), rad, fp)));
    if (last < lay.place_action)  // resting before the part is placed
      vals.push_back(std::max(0.0, prob.clearance_footprint -
                                       separation_disc_box(base.position(), rad,
                                                           lay.self_goal_box)));
    if (prob.home_park_radius > 0.0 &&
        sk.actions[static_cast<size_t>(last)].kind == ActionKind::Retract) {
      const Pose2 home = scene.robots[static_cast<size_t>(r)].home_config.pose;
      const double d = (base.position() - home.position()).norm();
      vals.push_back(std::max(0.0, d - prob.home_park_radius));
    }
    rows.push_back({ResidualKind::Region, last, std::move(vals)});
  }

  // Collision clearances per switch, against the frozen world.
  for (size_t si = 0; si < lay.switches.size(); ++si) {
    const SwitchInfo& sw = lay.switches[si];
    const Action& a = sk.actions[static_cast<size_t>(sw.action)];
    const SwitchWorld& world = lay.worlds[si];

    struct Active {
      bool is_disc;
      Vec2 center;
      double radius;
      OrientedBox box;
      int skip_entity;  // pair suppressed (carrier/cargo)
      int entity;
    };
    std::vector<Active> act;
    for (int r : sw.robots) {
      const Pose2 base = c.robot_pose.at({sw.action, r});
      act.push_back({true, base.position(), scene.robots[static_cast<size_t>(r)].base_radius,
                     {}, -1, r});
    }
    // the handled object, posed by phase
    {
      const Pose2 p = object_pose_at(prob, c, sw.action);
      int carrier = -1;
      if (a.kind == ActionKind::Handover) carrier = a.robot;
      if (a.kind == ActionKind::Place) carrier = a.robot;
      Active ao;
      ao.is_disc = false;
      ao.box = obj.box_at(p);
      ao.center = ao.box.center;
      ao.radius = 0.0;
      ao.skip_entity = carrier;
      ao.entity = scene.object_entity(sub.object);
      act.push_back(ao);
    }

    double slack = 1e300;
    for (size_t i = 0; i < act.size(); ++i) {
      for (size_t j = i + 1; j < act.size(); ++j) {
        if (act[i].skip_entity == act[j].entity || act[j].skip_entity == act[i].entity)
          continue;
        double sep;
        if (act[i].is_disc && act[j].is_disc)
          sep = separation_disc_disc(act[i].center, act[i].radius, act[j].center,
                                     act[j].radius) -
                prob.clearance_robot;
        else if (act[i].is_disc)
          sep = separation_disc_box(act[i].center, act[i].radius, act[j].box) -
                prob.clearance_static;
        else
          sep = separation_box_box(act[i].box, act[j].box) - prob.clearance_static;
        slack = std::min(slack, sep);
      }
      const double broad =
          act[i].is_disc ? act[i].radius : act[i].box.circumradius();
      for (const PassiveShape& ps : world.shapes) {
        if (ps.carrier >= 0 && ps.carrier == act[i].entity) continue;
        const double coarse = (ps.center - act[i].center).norm() - ps.bound_radius - broad;
        if (coarse > prob.clearance_static + 0.2) continue;
        double sep;
        if (act[i].is_disc && ps.is_disc)
          sep = separation_disc_disc(act[i].center, act[i].radius, ps.center, ps.radius);
        else if (act[i].is_disc)
          sep = separation_disc_box(act[i].center, act[i].radius, ps.box);
        else if (ps.is_disc)
          sep = separation_disc_box(ps.center, ps.radius, act[i].box);
        else
          sep = separation_box_box(act[i].box, ps.box);
        slack = std::min(slack, sep - prob.clearance_static);
      }
    }
    rows.push_back({ResidualKind::Collision, sw.action, {std::max(0.0, -slack)}});
  }

  // Reachability between a robot's consecutive bound states; the small
  // headroom factor keeps accepted keyframes connectable at full speed.
  for (int r : sub.robots) {
    const RobotSpec& spec = scene.robots[static_cast<size_t>(r)];
    const Anchor& an = lay.anchors.at(r);
    Pose2 prev = an.pose;
    double tprev = an.t;
    for (int action : lay.robot_action_order.at(r)) {
      const Pose2 cur = c.robot_pose.at({action, r});
      const double tcur = prob.times.time_of(action);
      const double dt = std::max(1e-9, tcur - tprev);
      const double d = config_distance(prev, cur, w);
      const double dth = std::abs(wrap_angle(cur.theta - prev.theta));
      rows.push_back({ResidualKind::Reach, action,
                      {std::max(0.0, d - 0.98 * spec.v_max * dt),
                       std::max(0.0, dth - 0.98 * spec.omega_max * dt)}});
      prev = cur;
      tprev = tcur;
    }
  }

  if (with_cost) {
    const double sw_w = std::sqrt(prob.cost.switch_weight);
    for (int r : sub.robots) {
      Pose2 prev = lay.anchors.at(r).pose;
      for (int action : lay.robot_action_order.at(r)) {
        const Pose2 cur = c.robot_pose.at({action, r});
        rows.push_back({ResidualKind::Reach, action,
                        {sw_w * (cur.x - prev.x), sw_w * (cur.y - prev.y),
                         sw_w * w * wrap_angle(cur.theta - prev.theta)}});
        prev = cur;
      }
    }
  }
  return rows;
}

Eigen::VectorXd stack_rows(const std::vector<RowBlock>& blocks, double hinge_weight) {
  size_t total = 0;
  for (const auto& b : blocks) total += b.value.size();
  Eigen::VectorXd v(static_cast<Eigen::Index>(total));
  Eigen::Index at = 0;
  for (const auto& b : blocks) {
    const bool hinge = b.kind == ResidualKind::Region || b.kind == ResidualKind::Collision ||
                       b.kind == ResidualKind::Reach;
    for (double x : b.value) v[at++] = hinge ? hinge_weight * x : x;
  }
  return v;
}

double switch_cost(const KeyframeProblem& prob, const Layout& lay, const Candidate& c) {
  double cost = 0.0;
  for (int r : prob.sub->robots) {
    Pose2 prev = lay.anchors.at(r).pose;
    for (int action : lay.robot_action_order.at(r)) {
      const Pose2 cur = c.robot_pose.at({action, r});
      const double d = config_distance(prev, cur, prob.angle_weight);
      cost += d * d;
      prev = cur;
    }
  }
  return prob.cost.switch_weight * cost;
}

// Exact feasibility: equality residuals under tol, hinges at zero, and a
// strict collision query per switch.
bool accept(const KeyframeProblem& prob, const Layout& lay, const Candidate& c) {
  const Scene& scene = *prob.scene;
  const SubProblem& sub = *prob.sub;
  const auto blocks = residual_blocks(prob, lay, c, false);
  for (const auto& b : blocks) {
    double n2 = 0.0;
    for (double x : b.value) n2 += x * x;
    const double n = std::sqrt(n2);
    const bool hinge = b.kind == ResidualKind::Region || b.kind == ResidualKind::Collision ||
                       b.kind == ResidualKind::Reach;
    if (hinge ? n > 1e-7 : n >= prob.tol) return false;
  }

  // Strict exact check against the live plan, per switch.
  CollisionQuery q{&scene, prob.plan, prob.angle_weight};
  const Skeleton& sk = sub.skeleton;
  for (const SwitchInfo& sw : lay.switches) {
    const Action& a = sk.actions[static_cast<size_t>(sw.action)];
    MovingRobots moving;
    for (int r : sw.robots) {
      Config cfg;
      cfg.pose = c.robot_pose.at({sw.action, r});
      moving[r] = cfg;
    }
    // clamp the idle teammates explicitly so they are checked too
    for (int r : sub.robots) {
      if (moving.count(r)) continue;
      moving[r] = prob.plan->evaluate(scene, r, sw.t);
    }
    CarriedObjects carried;
    CarriedObject co;
    co.pose = object_pose_at(prob, c, sw.action);
    co.carrier = -1;
    if (a.kind == ActionKind::Handover || a.kind == ActionKind::Place) co.carrier = a.robot;
    carried[sub.object] = co;
    if (!collision_free(q, moving, carried, sw.t)) return false;
  }
  return true;
}

}  // namespace

double ConstraintResidual::norm() const {
  double n2 = 0.0;
  for (double x : value) n2 += x * x;
  return std::sqrt(n2);
}

Pose2 KeyframeSet::grasp_transform(const Scene& scene, const SubProblem& sub,
                                   int action) const {
  const Action& a = sub.skeleton.actions[static_cast<size_t>(action)];
  const int holder = (a.kind == ActionKind::Handover) ? a.partner : a.robot;
  Pose2 obj_pose;
  if (a.kind == ActionKind::Pick)
    obj_pose = scene.objects[static_cast<size_t>(sub.object)].start_pose;
  else
    obj_pose = object_poses.at(action);
  const Pose2 grip =
      scene.robots[static_cast<size_t>(holder)].gripper_pose(robot_configs.at({action, holder}).pose);
  return grip.inverse().compose(obj_pose);
}

std::optional<SwitchTimeSample> sample_switch_times(double t_bar, const SubProblem& sub,
                                                    const PlanState& plan, const Scene& scene,
                                                    double window, Rng& rng) {
  (void)scene;
  const Skeleton& sk = sub.skeleton;
  const double hi = t_bar + window;
  SwitchTimeSample out;
  out.window = window;
  out.times.assign(sk.actions.size(), 0.0);

  // Per-robot sorted draws above both the shared and the robot's own horizon.
  std::map<int, std::vector<double>> draws;
  std::map<int, int> cursor;
  for (int r : sub.robots) {
    const double lb = std::max(t_bar, plan.horizon[static_cast<size_t>(r)]);
    if (lb >= hi) return std::nullopt;
    const auto order = sk.robot_switches(r);
    std::vector<double> d;
    for (size_t i = 0; i < order.size(); ++i) d.push_back(uniform_real(rng, lb, hi));
    std::sort(d.begin(), d.end());
    draws[r] = std::move(d);
    cursor[r] = 0;
  }

  for (size_t i = 0; i < sk.actions.size(); ++i) {
    const Action& a = sk.actions[i];
    if (a.kind == ActionKind::Handover) {
      const double t_h = draws[a.robot][static_cast<size_t>(cursor[a.robot]++)];
      out.times[i] = t_h;
      // receiver adopts the giver's draw; its later draws must follow it
      auto& dv = draws[a.partner];
      const int at = cursor[a.partner]++;
      dv[static_cast<size_t>(at)] = t_h;
      for (size_t k = static_cast<size_t>(at) + 1; k < dv.size(); ++k)
        if (dv[k] <= t_h) dv[k] = uniform_real(rng, t_h, hi);
      std::sort(dv.begin() + at + 1, dv.end());
    } else {
      out.times[i] = draws[a.robot][static_cast<size_t>(cursor[a.robot]++)];
    }
  }

  // strict per-robot monotonicity above each robot's own horizon (a
  // unified handover draw can land below the receiver's busy time)
  for (int r : sub.robots) {
    double prev = std::max(t_bar, plan.horizon[static_cast<size_t>(r)]);
    for (int action : sk.robot_switches(r)) {
      if (out.times[static_cast<size_t>(action)] <= prev) return std::nullopt;
      prev = out.times[static_cast<size_t>(action)];
    }
  }
  return out;
}

std::vector<ConstraintResidual> residuals(const KeyframeProblem& prob, const KeyframeSet& cand) {
  const Layout lay = build_layout(prob);
  Candidate c;
  for (const auto& [key, cfg] : cand.robot_configs) c.robot_pose[key] = cfg.pose;
  c.object_pose = cand.object_poses;
  c.sites = cand.grasp_sites;
  std::vector<ConstraintResidual> out;
  for (auto& b : residual_blocks(prob, lay, c, false)) {
    ConstraintResidual r;
    r.kind = b.kind;
    r.action = b.action;
    r.value = std::move(b.value);
    out.push_back(std::move(r));
  }
  return out;
}

Pose2 object_pose_at_switch(const KeyframeProblem& prob, const KeyframeSet& cand, int action) {
  Candidate c;
  for (const auto& [key, cfg] : cand.robot_configs) c.robot_pose[key] = cfg.pose;
  c.object_pose = cand.object_poses;
  c.sites = cand.grasp_sites;
  return object_pose_at(prob, c, action);
}

std::optional<KeyframeSet> solve_keyframes(const KeyframeProblem& prob, int restarts, Rng& rng) {
  const Scene& scene = *prob.scene;
  const SubProblem& sub = *prob.sub;
  const Skeleton& sk = sub.skeleton;
  const Layout lay = build_layout(prob);
  const ObjectSpec& obj = scene.objects[static_cast<size_t>(sub.object)];
  const int n_sites = static_cast<int>(obj.grasp_sites.size());

  if (sk.handover_count() > 0 && n_sites < 2) return std::nullopt;

  std::optional<KeyframeSet> best;

  for (int restart = 0; restart < restarts; ++restart) {
    // Random grasp-site choices; receivers take a site distinct from the
    // giver's current one.
    std::map<int, int> sites;
    std::map<int, int> holder_site;  // robot -> its current site
    for (size_t i = 0; i < sk.actions.size(); ++i) {
      const Action& a = sk.actions[i];
      if (a.kind == ActionKind::Pick) {
        const int s = uniform_int(rng, 0, n_sites - 1);
        sites[static_cast<int>(i)] = s;
        holder_site[a.robot] = s;
      } else if (a.kind == ActionKind::Handover) {
        const int giver_site = holder_site.count(a.robot) ? holder_site[a.robot] : -1;
        int s = uniform_int(rng, 0, n_sites - 2);
        if (giver_site >= 0 && s >= giver_site) ++s;
        sites[static_cast<int>(i)] = s;  // receiver's grasp at this switch
        holder_site[a.partner] = s;
      }
    }

    // Random init: robot configs uniform over their regions, handover
    // object poses uniform over the receiver's region.
    Eigen::VectorXd z(lay.dim);
    for (const auto& [key, off] : lay.var_of_robot) {
      if (off < 0) continue;
      const Rect& reg = scene.robots[static_cast<size_t>(key.second)].operating_region;
      z[off] = uniform_real(rng, reg.lo.x, reg.hi.x);
      z[off + 1] = uniform_real(rng, reg.lo.y, reg.hi.y);
      z[off + 2] = uniform_real(rng, -kPi, kPi);
    }
    for (const auto& [action, off] : lay.var_of_object) {
      if (off < 0) continue;
      const Action& a = sk.actions[static_cast<size_t>(action)];
      const Rect& reg = scene.robots[static_cast<size_t>(a.partner)].operating_region;
      z[off] = uniform_real(rng, reg.lo.x, reg.hi.x);
      z[off + 1] = uniform_real(rng, reg.lo.y, reg.hi.y);
      z[off + 2] = uniform_real(rng, -kPi, kPi);
    }

    auto eval = [&](const Eigen::VectorXd& zz, bool with_cost) {
      const Candidate c = unpack(prob, lay, zz, sites);
      return stack_rows(residual_blocks(prob, lay, c, with_cost), 3.0);
    };

    // Damped least squares; cost rows first, then a constraint-only polish.
    for (const bool with_cost : {true, false}) {
      double damping = 1e-3;
      const int max_iters = with_cost ? 60 : 40;
      Eigen::VectorXd r = eval(z, with_cost);
      double f = r.squaredNorm();
      for (int iter = 0; iter < max_iters; ++iter) {
        if (!with_cost && f < 1e-20) break;
        const double h = 1e-7;
        Eigen::MatrixXd J(r.size(), lay.dim);
        for (int k = 0; k < lay.dim; ++k) {
          Eigen::VectorXd zp = z;
          zp[k] += h;
          J.col(k) = (eval(zp, with_cost) - r) / h;
        }
        const Eigen::MatrixXd JtJ = J.transpose() * J;
        const Eigen::VectorXd g = J.transpose() * r;
        bool improved = false;
        for (int tries = 0; tries < 6; ++tries) {
          Eigen::MatrixXd A = JtJ;
          A.diagonal().array() += damping;
          const Eigen::VectorXd step = A.ldlt().solve(-g);
          const Eigen::VectorXd z2 = z + step;
          const Eigen::VectorXd r2 = eval(z2, with_cost);
          const double f2 = r2.squaredNorm();
          if (f2 < f) {
            z = z2;
            r = r2;
            f = f2;
            damping = std::max(damping * 0.4, 1e-9);
            improved = true;
            if (step.lpNorm<Eigen::Infinity>() < 1e-12) iter = max_iters;
            break;
          }
          damping *= 8.0;
        }
        if (!improved) break;
      }
    }

    const Candidate c = unpack(prob, lay, z, sites);
    if (!accept(prob, lay, c)) continue;

    KeyframeSet ks;
    for (const auto& [key, pose] : c.robot_pose) {
      Config cfg;
      cfg.pose = Pose2(pose.x, pose.y, pose.theta);
      // grip is set while the robot holds the part leaving this switch
      const int r = key.second;
      const Action& a = sk.actions[static_cast<size_t>(key.first)];
      const bool acquires = (a.kind == ActionKind::Pick && a.robot == r) ||
                            (a.kind == ActionKind::Handover && a.partner == r);
      const bool releases = (a.kind == ActionKind::Handover && a.robot == r) ||
                            (a.kind == ActionKind::Place && a.robot == r);
      cfg.grip = acquires || (!releases && holder_before(sk, key.first) == r);
      ks.robot_configs[key] = cfg;
    }
    for (const auto& [action, pose] : c.object_pose) ks.object_poses[action] = pose;
    ks.grasp_sites = sites;
    ks.times = prob.times;
    ks.cost = switch_cost(prob, lay, c);
    ks.restart_index = restart;
    if (!best || ks.cost < best->cost) best = std::move(ks);
  }
  return best;
}

}  // namespace mra
