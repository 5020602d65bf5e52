#pragma once

#include <set>
#include <string>
#include <vector>

#include "mra/plan_state.hpp"
#include "mra/scene.hpp"

namespace mra {

/// Part-connectivity graph over object indices; -1 stands for GROUND.
struct AssemblyGraph {
  int object_count = 0;
  std::vector<std::vector<int>> neighbors;  // per object, sorted; may contain -1
  static AssemblyGraph from_scene(const Scene& scene);

  bool adjacent_to_ground(int object_index) const;
};

/// Unplaced objects adjacent to GROUND or to a placed object.
std::set<int> placeable_set(const AssemblyGraph& graph, const std::set<int>& placed);

/// Placeable object with the most placed neighbors; ties go to the
/// smallest object id. Throws std::runtime_error when nothing is placeable.
int next_object(const AssemblyGraph& graph, const Scene& scene, const std::set<int>& placed);

struct RobotSubset {
  std::vector<int> robots;  // sorted indices
  double key = 0.0;         // latest busy time over the subset
};

using RobotPriorityList = std::vector<RobotSubset>;

/// All robot subsets of size 1..max_team ordered by ascending latest busy
/// time, then subset size, then lexicographic robot ids.
RobotPriorityList prioritize_robots(const PlanState& plan, const Scene& scene, int max_team);

}  // namespace mra
