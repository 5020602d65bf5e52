#pragma once

#include <map>
#include <optional>
#include <vector>

#include "mra/collision.hpp"
#include "mra/rng.hpp"
#include "mra/skeletons.hpp"

namespace mra {

/// Mode-switch times, stored per skeleton action; a handover's shared
/// time appears once and binds both robots.
struct SwitchTimeSample {
  std::vector<double> times;  // indexed by action
  double window = 0.0;

  double time_of(int action) const { return times[static_cast<size_t>(action)]; }
};

/// Sorted uniform draws per robot from (max(T_bar, busy_r), T_bar + window],
/// with handover times unified to the giver's draw. Returns nullopt when a
/// robot has no room inside the window (caller should widen it).
std::optional<SwitchTimeSample> sample_switch_times(double t_bar, const SubProblem& sub,
                                                    const PlanState& plan, const Scene& scene,
                                                    double window, Rng& rng);

enum class ResidualKind { Grasp, PlacementGoal, HandoverSync, Region, Collision, Reach };

struct ConstraintResidual {
  ResidualKind kind;
  int action = -1;
  std::vector<double> value;

  double norm() const;
};

struct CostConfig {
  double switch_weight = 0.1;  // squared displacement between a robot's keyframes
  double path_weight = 0.5;    // lambda: length vs time trade-off downstream
};

/// Jointly solved mode-switch configurations for one sub-problem.
struct KeyframeSet {
  std::map<std::pair<int, int>, Config> robot_configs;  // (action, robot) -> config
  std::map<int, Pose2> object_poses;                    // action -> object pose
  std::map<int, int> grasp_sites;                       // action -> site index chosen
  SwitchTimeSample times;
  double cost = 0.0;
  int restart_index = -1;

  /// Gripper->object transform established at `action` (pick or handover).
  Pose2 grasp_transform(const Scene& scene, const SubProblem& sub, int action) const;
};

struct KeyframeProblem {
  const Scene* scene = nullptr;
  const PlanState* plan = nullptr;
  const SubProblem* sub = nullptr;
  SwitchTimeSample times;
  CostConfig cost;
  double tol = 1e-6;
  double angle_weight = 0.3;
  double clearance_robot = 0.06;      // margin kept to other robots / moving bodies
  double clearance_static = 0.03;     // margin kept to obstacles and resting parts
  double clearance_footprint = 0.02;  // margin kept off future goal footprints
  double home_park_radius = 0.0;      // > 0: retract keyframes stay near home

  // Switches already bound by executed path segments; their configs,
  // object poses and times are constants for the solve.
  std::map<std::pair<int, int>, Config> pinned_robot;
  std::map<int, Pose2> pinned_object;
};

/// Deterministic stacked residuals for a candidate assignment.
std::vector<ConstraintResidual> residuals(const KeyframeProblem& prob, const KeyframeSet& cand);

/// Randomized-restart damped least squares over all remaining switch
/// configurations. Returns the lowest-cost feasible candidate, or nullopt
/// when every restart fails tolerance, collision, or reachability.
std::optional<KeyframeSet> solve_keyframes(const KeyframeProblem& prob, int restarts, Rng& rng);

/// Object pose implied by the skeleton phase at a given switch.
Pose2 object_pose_at_switch(const KeyframeProblem& prob, const KeyframeSet& cand, int action);

}  // namespace mra
