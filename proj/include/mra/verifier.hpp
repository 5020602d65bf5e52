#pragma once

#include <string>
#include <vector>

#include "mra/plan_state.hpp"
#include "mra/scene.hpp"

namespace mra {

struct VerifyFinding {
  std::string kind;  // collision | speed | region | grasp | final_pose | knots | events
  std::string detail;
  double t = 0.0;
};

struct VerifyReport {
  std::vector<VerifyFinding> findings;

  bool empty() const { return findings.empty(); }
  std::string summary() const;
};

/// Independent re-simulation of the committed plan at resolution dt:
/// pairwise collisions, speed and angular-rate bounds, region containment,
/// grasp consistency of attached ranges, and final object poses.
VerifyReport verify_plan(const Scene& scene, const PlanState& plan, double dt,
                         double angle_weight = 0.3, double final_pose_tol = 1e-6);

}  // namespace mra
