#pragma once

#include <string>

#include "mra/plan_state.hpp"
#include "mra/scene.hpp"

namespace mra {

/// One SVG schedule: a row per robot, colored bars per action, vertical
/// links between the two parties of each handover.
std::string render_gantt(const Scene& scene, const PlanState& plan);

/// World snapshot at time t (robots, parts, regions, obstacles).
std::string render_frame(const Scene& scene, const PlanState& plan, double t);

/// Writes gantt.svg, or frame_000.svg .. frame_NNN.svg at the given step.
/// Returns the number of files written.
int render_to_dir(const Scene& scene, const PlanState& plan, const std::string& out_dir,
                  const std::string& mode, double frame_dt = 0.5);

}  // namespace mra
