#pragma once

#include <optional>
#include <vector>

#include "mra/collision.hpp"
#include "mra/rng.hpp"
#include "mra/timed_path.hpp"

namespace mra {

struct SpaceTimePoint {
  Config q;
  double t = 0.0;
};

struct DistanceParams {
  double lambda = 0.5;        // path-length vs elapsed-time trade-off
  double v_max = 1.0;         // weighted config-space speed bound
  double angle_weight = 0.3;  // radians-to-meters equivalence
};

inline double config_metric(const Pose2& a, const Pose2& b, double angle_weight) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double dth = wrap_angle(b.theta - a.theta);
  return std::sqrt(dx * dx + dy * dy + angle_weight * angle_weight * dth * dth);
}

/// Direction-dependent space-time distance: finite only when b lies ahead
/// in time and is reachable under the speed bound; identical points cost 0.
double st_distance(const SpaceTimePoint& a, const SpaceTimePoint& b, const DistanceParams& p);

/// Uniform sample over a configuration box crossed with [t_min, t_max].
SpaceTimePoint sample_space_time(const Rect& bounds, double t_min, double t_max, Rng& rng);

/// Candidate goal states; the same configuration may appear at several
/// arrival times. `generation` counts window extensions upstream.
struct GoalSet {
  std::vector<SpaceTimePoint> points;
  int generation = 0;
};

/// What moves during one planning query: a single robot, optionally
/// rigidly carrying an object.
struct MotionQuery {
  int robot = -1;
  std::optional<int> cargo;  // object index
  Pose2 cargo_grasp;         // gripper->object transform
  bool grip = false;
};

struct StRrtParams {
  DistanceParams dist;
  double omega_max = 1e9;
  double max_edge_duration = 0.5;
  double goal_bias = 0.1;
  double wait_bias = 0.1;
  double dt_check = 0.05;
};

struct StRrtResult {
  TimedPath path;
  int goal_index = -1;
};

/// Bi-directional RRT through configuration x time amidst the committed
/// plan. Returns the first connecting path, or nullopt after `budget`
/// iterations.
std::optional<StRrtResult> st_rrt_connect(const CollisionQuery& world, const MotionQuery& mq,
                                          const SpaceTimePoint& start, const GoalSet& goals,
                                          const StRrtParams& params, int budget, Rng& rng);

/// Randomized shortcutting plus knot smoothing. Endpoints are preserved,
/// knots at or before `fixed_prefix_until` are never altered, and the
/// returned path never costs more than the input under
/// lambda * length + (1 - lambda) * duration.
TimedPath shortcut_and_smooth(const TimedPath& path, const CollisionQuery& world,
                              const MotionQuery& mq, double fixed_prefix_until, int rounds,
                              const StRrtParams& params, Rng& rng);

/// Cost surrogate used by the post-processing stage.
double path_cost(const TimedPath& path, const DistanceParams& p);

}  // namespace mra
