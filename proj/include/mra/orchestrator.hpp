#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "mra/assembly.hpp"
#include "mra/keyframes.hpp"
#include "mra/stplanner.hpp"

namespace mra {

struct PlannerConfig {
  std::uint64_t seed = 1;
  int agents = 0;  // 0 = use every robot in the scene file
  double lambda = 0.5;
  double v_max_override = 0.0;  // > 0 replaces every robot's speed bound
  int max_team = 2;
  int restarts = 20;
  int time_resamples = 5;
  int window_doublings = 8;
  int rrt_budget = 5000;
  int shortcut_rounds = 100;
  int segment_retries = 3;
  int skeleton_max_actions = 8;
  double tol_kf = 1e-6;
  double dt_check = 0.05;
  double verify_dt = 0.005;
  double fixed_time = 0.0;  // > 0: all mode switches on the slot grid
  double angle_weight = 0.3;
  double switch_cost_weight = 0.1;
  double home_park_radius = 1.2;  // retract keyframes stay near home

  bool operator==(const PlannerConfig&) const = default;
};

/// Wall-clock accounting split the way result tables break it down.
struct PhaseStats {
  double keyframes_s = 0.0;
  double path_s = 0.0;
  double post_s = 0.0;
  double total_s = 0.0;
  long keyframe_solves = 0;
  long rrt_queries = 0;
};

struct FullPlan {
  PlanState state;
  double makespan = 0.0;
  PhaseStats stats;
  int backtracks = 0;
};

struct PlanResult {
  std::optional<FullPlan> plan;
  std::string failure_reason;

  bool ok() const { return plan.has_value(); }
};

/// Assignments found infeasible, kept for deprioritized revisits.
struct LedgerKey {
  int object = -1;
  std::vector<int> robots;
  Skeleton skeleton;

  bool operator<(const LedgerKey& o) const;
};

struct LedgerEntry {
  int failures = 0;
  int last_step = -1;
};

using InfeasibleLedger = std::map<LedgerKey, LedgerEntry>;

enum class LowerBound { Pass, PrunePlacement, PruneKeyframes };

/// Relaxed feasibility probes for a sub-problem: (i) an exact test that
/// the goal footprint is free of placed parts and obstacles, (ii) a
/// keyframes-only solve. (ii) failing does not certify infeasibility.
LowerBound lower_bound_checks(const Scene& scene, const PlanState& plan, const SubProblem& sub,
                              const PlannerConfig& cfg, Rng& rng);

/// Restore the plan from `depth` placements ago.
PlanState backtrack(const PlanState& plan, int depth);

/// Scene actually planned: optional agent subset and speed override applied.
Scene effective_scene(const Scene& scene, const PlannerConfig& cfg);

/// The full pipeline: pick object and robots by priority, solve keyframes,
/// connect them in space-time, commit; rewinds placements when an object
/// cannot be delivered. Deterministic for a fixed (scene, config, seed).
PlanResult plan_assembly(const Scene& scene, const PlannerConfig& cfg, std::uint64_t seed);

/// Baseline where every mode switch lands on a multiple of t_fix and each
/// action occupies exactly one slot.
PlanResult plan_assembly_fixed_time(const Scene& scene, const PlannerConfig& cfg,
                                    std::uint64_t seed, double t_fix);

}  // namespace mra
