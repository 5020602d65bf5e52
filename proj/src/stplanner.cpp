#include "mra/stplanner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mra {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool same_point(const SpaceTimePoint& a, const SpaceTimePoint& b) {
  return a.t == b.t && a.q.pose == b.q.pose;
}

// Within-bound straight edge in space-time (strictly forward in time).
bool edge_feasible(const SpaceTimePoint& from, const SpaceTimePoint& to,
                   const StRrtParams& p) {
  const double dt = to.t - from.t;
  if (dt <= 0.0) return false;
  const double d = config_metric(from.q.pose, to.q.pose, p.dist.angle_weight);
  if (d > p.dist.v_max * dt) return false;
  const double dth = std::abs(wrap_angle(to.q.pose.theta - from.q.pose.theta));
  return dth <= p.omega_max * dt;
}

struct Node {
  SpaceTimePoint y;
  int parent = -1;
  int goal_index = -1;  // backward roots remember their goal
};

CarriedObjects cargo_at(const CollisionQuery& world, const MotionQuery& mq,
                        const Config& cfg) {
  CarriedObjects carried;
  if (mq.cargo) {
    const RobotSpec& spec = world.scene->robots[static_cast<size_t>(mq.robot)];
    CarriedObject co;
    co.pose = spec.gripper_pose(cfg.pose).compose(mq.cargo_grasp);
    co.carrier = mq.robot;
    carried[*mq.cargo] = co;
  }
  return carried;
}

bool edge_clear(const CollisionQuery& world, const MotionQuery& mq,
                const SpaceTimePoint& from, const SpaceTimePoint& to, const StRrtParams& p) {
  if (!edge_feasible(from, to, p)) return false;
  SweepParams sp;
  sp.dt_check = p.dt_check;
  return sweep_collision_free(world, mq.robot, from.q, from.t, to.q, to.t,
                              cargo_at(world, mq, from.q), sp);
}

// Step from `n` toward `target`, forward or backward in time, clipped to
// the edge-duration and speed caps. Returns the reached point and whether
// the target itself was reached.
std::pair<SpaceTimePoint, bool> steer(const SpaceTimePoint& n, const SpaceTimePoint& target,
                                      bool forward, const StRrtParams& p) {
  const double dt_total = forward ? target.t - n.t : n.t - target.t;
  SpaceTimePoint out = n;
  if (dt_total <= 0.0) return {out, false};
  const double dt = std::min(dt_total, p.max_edge_duration);
  const double d = config_metric(n.q.pose, target.q.pose, p.dist.angle_weight);
  const double dth = std::abs(wrap_angle(target.q.pose.theta - n.q.pose.theta));

  double frac = dt / dt_total;  // straight space-time line
  if (d > 0.0) frac = std::min(frac, 0.999 * p.dist.v_max * dt / d);
  if (dth > 0.0) frac = std::min(frac, 0.999 * p.omega_max * dt / dth);

  const bool reached = (dt == dt_total) && (frac >= dt / dt_total - 1e-15);
  if (reached) {
    out = target;
    return {out, true};
  }
  out.q.pose = lerp_pose(n.q.pose, target.q.pose, frac);
  out.q.grip = n.q.grip;
  out.t = forward ? n.t + dt : n.t - dt;
  return {out, false};
}

TimedPath assemble(const std::vector<Node>& fwd, int fi, const std::vector<Node>& bwd, int bi,
                   bool grip, int* goal_index) {
  std::vector<Knot> front;
  for (int i = fi; i >= 0; i = fwd[static_cast<size_t>(i)].parent) {
    const auto& y = fwd[static_cast<size_t>(i)].y;
    front.push_back({y.t, y.q.pose, grip});
  }
  std::reverse(front.begin(), front.end());
  TimedPath path;
  for (const Knot& k : front) path.append(k);
  int root = bi;
  for (int i = bi; i >= 0; i = bwd[static_cast<size_t>(i)].parent) {
    const auto& y = bwd[static_cast<size_t>(i)].y;
    path.append({y.t, y.q.pose, grip});
    root = i;
  }
  if (goal_index) *goal_index = bwd[static_cast<size_t>(root)].goal_index;
  return path;
}

}  // namespace

double st_distance(const SpaceTimePoint& a, const SpaceTimePoint& b, const DistanceParams& p) {
  if (same_point(a, b)) return 0.0;
  if (b.t <= a.t) return kInf;
  const double dq = config_metric(a.q.pose, b.q.pose, p.angle_weight);
  const double dt = b.t - a.t;
  if (dq / dt > p.v_max) return kInf;
  return p.lambda * dq + (1.0 - p.lambda) * dt;
}

SpaceTimePoint sample_space_time(const Rect& bounds, double t_min, double t_max, Rng& rng) {
  SpaceTimePoint y;
  y.q.pose = Pose2(uniform_real(rng, bounds.lo.x, bounds.hi.x),
                   uniform_real(rng, bounds.lo.y, bounds.hi.y), uniform_real(rng, -kPi, kPi));
  y.t = uniform_real(rng, t_min, t_max);
  return y;
}

std::optional<StRrtResult> st_rrt_connect(const CollisionQuery& world, const MotionQuery& mq,
                                          const SpaceTimePoint& start, const GoalSet& goals,
                                          const StRrtParams& params, int budget, Rng& rng) {
  const Scene& scene = *world.scene;
  const Rect& bounds = scene.robots[static_cast<size_t>(mq.robot)].operating_region;

  // Degenerate and clearly unreachable goals are handled up front.
  std::vector<std::pair<SpaceTimePoint, int>> live_goals;
  double t_max = start.t;
  for (size_t g = 0; g < goals.points.size(); ++g) {
    const SpaceTimePoint& gp = goals.points[g];
    if (same_point(start, gp)) {
      TimedPath path;
      path.append({start.t, start.q.pose, mq.grip});
      return StRrtResult{std::move(path), static_cast<int>(g)};
    }
    if (st_distance(start, gp, params.dist) < kInf) {
      live_goals.emplace_back(gp, static_cast<int>(g));
      t_max = std::max(t_max, gp.t);
    }
  }
  if (live_goals.empty()) return std::nullopt;

  std::vector<Node> fwd{{start, -1, -1}};
  std::vector<Node> bwd;
  for (const auto& [gp, gi] : live_goals) bwd.push_back({gp, -1, gi});

  bool extend_forward = true;
  for (int iter = 0; iter < budget; ++iter) {
    auto& tree_a = extend_forward ? fwd : bwd;
    auto& tree_b = extend_forward ? bwd : fwd;

    // Sampling: uniform over space-time with goal/start and waiting biases.
    SpaceTimePoint target;
    const double roll = uniform_real(rng, 0.0, 1.0);
    if (roll < params.goal_bias) {
      if (extend_forward)
        target = live_goals[static_cast<size_t>(uniform_int(
                                rng, 0, static_cast<int>(live_goals.size()) - 1))]
                     .first;
      else
        target = start;
    } else if (roll < params.goal_bias + params.wait_bias) {
      const auto& n =
          tree_a[static_cast<size_t>(uniform_int(rng, 0, static_cast<int>(tree_a.size()) - 1))];
      target = n.y;
      target.t += extend_forward ? params.max_edge_duration : -params.max_edge_duration;
    } else {
      target = sample_space_time(bounds, start.t, t_max, rng);
    }

    // Nearest under the direction-aware metric.
    int nearest = -1;
    double best = kInf;
    for (size_t i = 0; i < tree_a.size(); ++i) {
      const double d = extend_forward ? st_distance(tree_a[i].y, target, params.dist)
                                      : st_distance(target, tree_a[i].y, params.dist);
      if (d < best) {
        best = d;
        nearest = static_cast<int>(i);
      }
    }
    if (nearest < 0) {
      extend_forward = !extend_forward;
      continue;
    }

    auto [pnew, reached_sample] = steer(tree_a[static_cast<size_t>(nearest)].y, target,
                                        extend_forward, params);
    (void)reached_sample;
    const SpaceTimePoint& pa = tree_a[static_cast<size_t>(nearest)].y;
    const bool forward_edge_ok = extend_forward
                                     ? edge_clear(world, mq, pa, pnew, params)
                                     : edge_clear(world, mq, pnew, pa, params);
    if (!forward_edge_ok) {
      extend_forward = !extend_forward;
      continue;
    }
    tree_a.push_back({pnew, nearest, -1});
    const int new_index = static_cast<int>(tree_a.size()) - 1;

    // Greedy connect from the other tree toward the fresh node.
    int b_nearest = -1;
    best = kInf;
    for (size_t i = 0; i < tree_b.size(); ++i) {
      const double d = extend_forward ? st_distance(pnew, tree_b[i].y, params.dist)
                                      : st_distance(tree_b[i].y, pnew, params.dist);
      if (d < best) {
        best = d;
        b_nearest = static_cast<int>(i);
      }
    }
    if (b_nearest >= 0) {
      int cur = b_nearest;
      while (true) {
        const SpaceTimePoint& pb = tree_b[static_cast<size_t>(cur)].y;
        auto [step, reached] = steer(pb, pnew, !extend_forward, params);
        const bool ok = extend_forward ? edge_clear(world, mq, step, pb, params)
                                       : edge_clear(world, mq, pb, step, params);
        if (!ok) break;
        tree_b.push_back({step, cur, -1});
        cur = static_cast<int>(tree_b.size()) - 1;
        if (reached) {
          StRrtResult res;
          if (extend_forward)
            res.path = assemble(fwd, new_index, bwd, cur, mq.grip, &res.goal_index);
          else
            res.path = assemble(fwd, cur, bwd, new_index, mq.grip, &res.goal_index);
          return res;
        }
      }
    }
    extend_forward = !extend_forward;
  }
  return std::nullopt;
}

double path_cost(const TimedPath& path, const DistanceParams& p) {
  double len = 0.0;
  for (size_t i = 1; i < path.knots.size(); ++i)
    len += config_metric(path.knots[i - 1].pose, path.knots[i].pose, p.angle_weight);
  const double dur = path.empty() ? 0.0 : path.end_time() - path.start_time();
  return p.lambda * len + (1.0 - p.lambda) * dur;
}

namespace {

double path_length_between(const TimedPath& path, double t_a, double t_b, double w) {
  double len = 0.0;
  Pose2 prev = path.sample(t_a).pose;
  for (const Knot& k : path.knots) {
    if (k.t <= t_a || k.t >= t_b) continue;
    len += config_metric(prev, k.pose, w);
    prev = k.pose;
  }
  len += config_metric(prev, path.sample(t_b).pose, w);
  return len;
}

}  // namespace

TimedPath shortcut_and_smooth(const TimedPath& path, const CollisionQuery& world,
                              const MotionQuery& mq, double fixed_prefix_until, int rounds,
                              const StRrtParams& params, Rng& rng) {
  TimedPath cur = path;
  if (cur.knots.size() < 3) return cur;
  const double w = params.dist.angle_weight;
  const double lo = std::max(fixed_prefix_until, cur.start_time());
  const double hi = cur.end_time();
  if (hi - lo < 1e-9) return cur;

  auto rebuild = [&](double t_a, double t_b, const Knot& ka, const Knot& kb) {
    TimedPath next;
    for (const Knot& k : cur.knots)
      if (k.t < t_a) next.append(k);
    next.append(ka);
    next.append(kb);
    for (const Knot& k : cur.knots)
      if (k.t > t_b) next.append(k);
    cur = std::move(next);
  };

  for (int round = 0; round < rounds; ++round) {
    if (round % 10 == 9) {
      // smoothing pass: pull interior knots toward their neighbors
      for (size_t i = 1; i + 1 < cur.knots.size(); ++i) {
        const Knot& a = cur.knots[i - 1];
        Knot& b = cur.knots[i];
        const Knot& c = cur.knots[i + 1];
        if (b.t <= fixed_prefix_until || a.t < fixed_prefix_until) continue;
        const double u = (b.t - a.t) / (c.t - a.t);
        const Pose2 mid = lerp_pose(a.pose, c.pose, u);
        const Pose2 blended = lerp_pose(b.pose, mid, 0.5);
        Knot cand = b;
        cand.pose = blended;
        const SpaceTimePoint pa{{a.pose, a.grip}, a.t};
        const SpaceTimePoint pb{{cand.pose, b.grip}, b.t};
        const SpaceTimePoint pc{{c.pose, c.grip}, c.t};
        const double before = config_metric(a.pose, b.pose, w) + config_metric(b.pose, c.pose, w);
        const double after = config_metric(a.pose, cand.pose, w) + config_metric(cand.pose, c.pose, w);
        if (after < before - 1e-12 && edge_clear(world, mq, pa, pb, params) &&
            edge_clear(world, mq, pb, pc, params))
          b = cand;
      }
      continue;
    }

    double t_a = uniform_real(rng, lo, hi);
    double t_b = uniform_real(rng, lo, hi);
    if (t_b < t_a) std::swap(t_a, t_b);
    if (t_b - t_a < 1e-3) continue;
    const Knot ka = cur.sample(t_a);
    const Knot kb = cur.sample(t_b);
    const double chord = config_metric(ka.pose, kb.pose, w);
    const double old_len = path_length_between(cur, t_a, t_b, w);
    if (old_len - chord < 1e-9) continue;
    const SpaceTimePoint pa{{ka.pose, ka.grip}, ka.t};
    const SpaceTimePoint pb{{kb.pose, kb.grip}, kb.t};
    if (!edge_clear(world, mq, pa, pb, params)) continue;
    rebuild(t_a, t_b, ka, kb);
  }

  // Drop interior knots whose removal keeps the path valid and no longer.
  bool changed = true;
  while (changed && cur.knots.size() > 2) {
    changed = false;
    for (size_t i = 1; i + 1 < cur.knots.size(); ++i) {
      const Knot& a = cur.knots[i - 1];
      const Knot& b = cur.knots[i];
      const Knot& c = cur.knots[i + 1];
      if (b.t <= fixed_prefix_until || a.t < fixed_prefix_until) continue;
      const double chord = config_metric(a.pose, c.pose, w);
      const double via = config_metric(a.pose, b.pose, w) + config_metric(b.pose, c.pose, w);
      if (via - chord > 1e-9) continue;  // knot carries geometry
      const SpaceTimePoint pa{{a.pose, a.grip}, a.t};
      const SpaceTimePoint pc{{c.pose, c.grip}, c.t};
      if (!edge_clear(world, mq, pa, pc, params)) continue;
      cur.knots.erase(cur.knots.begin() + static_cast<long>(i));
      changed = true;
      break;
    }
  }
  return cur;
}

}  // namespace mra
