#include "mra/assembly.hpp"

#include <algorithm>
#include <stdexcept>

namespace mra {

AssemblyGraph AssemblyGraph::from_scene(const Scene& scene) {
  AssemblyGraph g;
  g.object_count = scene.object_count();
  g.neighbors.resize(static_cast<size_t>(g.object_count));
  auto node_index = [&](const std::string& id) -> int {
    if (id == kGroundId) return -1;
    return scene.find_object(id);
  };
  for (const auto& [a, b] : scene.assembly_edges) {
    const int ia = node_index(a);
    const int ib = node_index(b);
    if (ia >= 0) g.neighbors[static_cast<size_t>(ia)].push_back(ib);
    if (ib >= 0) g.neighbors[static_cast<size_t>(ib)].push_back(ia);
  }
  for (auto& n : g.neighbors) {
    std::sort(n.begin(), n.end());
    n.erase(std::unique(n.begin(), n.end()), n.end());
  }
  return g;
}

bool AssemblyGraph::adjacent_to_ground(int object_index) const {
  const auto& n = neighbors[static_cast<size_t>(object_index)];
  return !n.empty() && n.front() == -1;
}

std::set<int> placeable_set(const AssemblyGraph& graph, const std::set<int>& placed) {
  std::set<int> out;
  for (int o = 0; o < graph.object_count; ++o) {
    if (placed.count(o)) continue;
    for (int n : graph.neighbors[static_cast<size_t>(o)]) {
      if (n == -1 || placed.count(n)) {
        out.insert(o);
        break;
      }
    }
  }
  return out;
}

int next_object(const AssemblyGraph& graph, const Scene& scene, const std::set<int>& placed) {
  const std::set<int> candidates = placeable_set(graph, placed);
  if (candidates.empty())
    throw std::runtime_error("assembly: no placeable object (done or malformed graph)");
  int best = -1;
  int best_count = -1;
  for (int o : candidates) {
    int count = 0;
    for (int n : graph.neighbors[static_cast<size_t>(o)])
      if (n >= 0 && placed.count(n)) ++count;
    const std::string& id = scene.objects[static_cast<size_t>(o)].id;
    if (count > best_count ||
        (count == best_count && id < scene.objects[static_cast<size_t>(best)].id)) {
      best = o;
      best_count = count;
    }
  }
  return best;
}

RobotPriorityList prioritize_robots(const PlanState& plan, const Scene& scene, int max_team) {
  if (max_team < 1) throw std::invalid_argument("prioritize_robots: max_team must be >= 1");
  const int m = scene.robot_count();
  RobotPriorityList out;
  // enumerate subsets of size 1..max_team
  std::vector<int> subset;
  auto recurse = [&](auto&& self, int start) -> void {
    if (!subset.empty()) {
      RobotSubset s;
      s.robots = subset;
      s.key = 0.0;
      for (int r : subset) s.key = std::max(s.key, plan.horizon[static_cast<size_t>(r)]);
      out.push_back(std::move(s));
    }
    if (static_cast<int>(subset.size()) == max_team) return;
    for (int r = start; r < m; ++r) {
      subset.push_back(r);
      self(self, r + 1);
      subset.pop_back();
    }
  };
  recurse(recurse, 0);

  std::stable_sort(out.begin(), out.end(), [&](const RobotSubset& a, const RobotSubset& b) {
    if (a.key != b.key) return a.key < b.key;
    if (a.robots.size() != b.robots.size()) return a.robots.size() < b.robots.size();
    std::vector<std::string> ia, ib;
    for (int r : a.robots) ia.push_back(scene.robots[static_cast<size_t>(r)].id);
    for (int r : b.robots) ib.push_back(scene.robots[static_cast<size_t>(r)].id);
    return ia < ib;
  });
  return out;
}

}  // namespace mra
