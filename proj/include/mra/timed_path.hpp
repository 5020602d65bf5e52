#pragma once

#include <optional>
#include <vector>

#include "mra/geometry.hpp"
#include "mra/scene.hpp"

namespace mra {

struct Knot {
  double t = 0.0;
  Pose2 pose;
  bool grip = false;
};

/// Rigid attachment of an object path to a robot's gripper frame over a
/// run of segments. `grasp` maps the gripper frame to the object frame.
struct Attachment {
  int first_knot = 0;  // segment range [first_knot, last_knot)
  int last_knot = 0;
  int robot = -1;
  Pose2 grasp;
};

/// Piecewise-linear trajectory in pose x time. Object paths may declare
/// attached ranges; inside those the pose is reproduced from the carrying
/// robot's path, which keeps the cargo exactly on the gripper.
struct TimedPath {
  std::vector<Knot> knots;
  std::vector<Attachment> attachments;

  bool empty() const { return knots.empty(); }
  double start_time() const { return knots.front().t; }
  double end_time() const { return knots.back().t; }

  const Attachment* attachment_at(double t) const;

  /// Interpolated pose with clamping outside [start_time, end_time].
  /// Ignores attachments; see PlanState::evaluate for the full rule.
  Knot sample(double t) const;

  void append(const Knot& k);

  /// Max over segments of weighted config-space rate.
  double max_segment_speed(double angle_weight) const;
};

/// Angle-aware linear interpolation between two poses.
Pose2 lerp_pose(const Pose2& a, const Pose2& b, double u);

}  // namespace mra
