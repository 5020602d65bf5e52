#pragma once

#include <string>

#include "mra/orchestrator.hpp"
#include "mra/scene.hpp"

namespace mra {

/// On-disk plan: scene fingerprint, config echo, committed trajectories
/// and the per-robot schedule. Round-trips losslessly.
struct PlanFile {
  std::string scene_hash;
  std::uint64_t seed = 0;
  PlannerConfig config;
  double makespan = 0.0;
  PlanState state;  // committed paths + events + placed, no snapshots
};

PlanFile make_plan_file(const Scene& scene, const FullPlan& plan, const PlannerConfig& cfg,
                        std::uint64_t seed);

std::string plan_to_json(const Scene& scene, const PlanFile& plan);
void save_plan(const Scene& scene, const PlanFile& plan, const std::string& path);

/// Config echo only, so callers can reconstruct the effective scene.
PlannerConfig read_plan_config(const std::string& path);

/// `scene` must be the effective scene the plan was computed on; entity
/// ids in the file are resolved against it and the hash must match.
PlanFile load_plan(const Scene& scene, const std::string& path);

}  // namespace mra
