#pragma once

#include <string>
#include <vector>

#include "mra/geometry.hpp"

namespace mra {

/// Robot state: planar base pose plus gripper engagement.
struct Config {
  Pose2 pose;
  bool grip = false;
};

struct ObjectSpec {
  std::string id;
  double width = 0.0;   // local x extent
  double height = 0.0;  // local y extent
  Pose2 start_pose;
  Pose2 goal_pose;
  std::vector<Vec2> grasp_sites;  // points in the object frame

  OrientedBox box_at(const Pose2& pose) const {
    return {pose.position(), {width * 0.5, height * 0.5}, pose.theta};
  }
  Vec2 site_at(const Pose2& pose, int site) const {
    return pose.apply(grasp_sites[static_cast<size_t>(site)]);
  }
};

struct RobotSpec {
  std::string id;
  double base_radius = 0.0;
  double gripper_offset = 0.0;  // gripper point ahead of the base center
  double v_max = 0.0;           // bound on the weighted config-space rate
  double omega_max = 0.0;
  Rect operating_region;
  Config home_config;

  Vec2 gripper_point(const Pose2& base) const {
    return base.position() + heading_dir(base.theta) * gripper_offset;
  }
  Pose2 gripper_pose(const Pose2& base) const {
    const Vec2 g = gripper_point(base);
    return Pose2(g.x, g.y, base.theta);
  }
};

/// Identifier for the virtual ground node of the assembly graph.
inline const std::string kGroundId = "GROUND";

/// Immutable world description. Entities are indexed with robots first
/// (0..m-1) and objects after them (m..m+n-1).
struct Scene {
  std::vector<ObjectSpec> objects;
  std::vector<RobotSpec> robots;
  std::vector<Rect> static_obstacles;
  std::vector<std::pair<std::string, std::string>> assembly_edges;

  int robot_count() const { return static_cast<int>(robots.size()); }
  int object_count() const { return static_cast<int>(objects.size()); }
  int entity_count() const { return robot_count() + object_count(); }

  bool is_robot(int entity) const { return entity >= 0 && entity < robot_count(); }
  bool is_object(int entity) const {
    return entity >= robot_count() && entity < entity_count();
  }
  int object_entity(int object_index) const { return robot_count() + object_index; }
  int object_index(int entity) const { return entity - robot_count(); }

  const std::string& entity_id(int entity) const {
    return is_robot(entity) ? robots[static_cast<size_t>(entity)].id
                            : objects[static_cast<size_t>(object_index(entity))].id;
  }

  /// -1 when no entity carries the id.
  int find_entity(const std::string& id) const {
    for (int r = 0; r < robot_count(); ++r)
      if (robots[static_cast<size_t>(r)].id == id) return r;
    for (int o = 0; o < object_count(); ++o)
      if (objects[static_cast<size_t>(o)].id == id) return object_entity(o);
    return -1;
  }

  int find_object(const std::string& id) const {
    for (int o = 0; o < object_count(); ++o)
      if (objects[static_cast<size_t>(o)].id == id) return o;
    return -1;
  }
  int find_robot(const std::string& id) const {
    for (int r = 0; r < robot_count(); ++r)
      if (robots[static_cast<size_t>(r)].id == id) return r;
    return -1;
  }

  /// Throws std::invalid_argument describing the first violated invariant.
  void validate() const;

  /// Copy with only the first `m` robots (scaling experiments).
  Scene with_agents(int m) const;
};

}  // namespace mra
