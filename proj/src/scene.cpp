#include "mra/scene.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace mra {

namespace {

void fail(const std::string& msg) { throw std::invalid_argument("scene: " + msg); }

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

void Scene::validate() const {
  std::set<std::string> ids;
  for (const auto& o : objects) {
    if (o.id.empty() || o.id == kGroundId) fail("bad object id '" + o.id + "'");
    if (!ids.insert(o.id).second) fail("duplicate id '" + o.id + "'");
    if (!finite_positive(o.width) || !finite_positive(o.height))
      fail(o.id + ": width and height must be positive");
    if (o.grasp_sites.empty()) fail(o.id + ": grasp_sites must be non-empty");
  }
  for (const auto& r : robots) {
    if (r.id.empty() || r.id == kGroundId) fail("bad robot id '" + r.id + "'");
    if (!ids.insert(r.id).second) fail("duplicate id '" + r.id + "'");
    if (!finite_positive(r.base_radius)) fail(r.id + ": base_radius must be positive");
    if (r.gripper_offset < 0.0) fail(r.id + ": gripper_offset must be >= 0");
    if (!finite_positive(r.v_max)) fail(r.id + ": v_max must be finite positive");
    if (!finite_positive(r.omega_max)) fail(r.id + ": omega_max must be finite positive");
    if (r.operating_region.lo.x >= r.operating_region.hi.x ||
        r.operating_region.lo.y >= r.operating_region.hi.y)
      fail(r.id + ": degenerate operating_region");
    if (!r.operating_region.contains(r.home_config.pose.position()))
      fail(r.id + ": home_config outside operating_region");
  }

  for (size_t i = 0; i < objects.size(); ++i) {
    for (size_t j = i + 1; j < objects.size(); ++j) {
      if (overlaps(objects[i].box_at(objects[i].start_pose),
                   objects[j].box_at(objects[j].start_pose)))
        fail("start poses of " + objects[i].id + " and " + objects[j].id + " overlap");
      if (overlaps(objects[i].box_at(objects[i].goal_pose),
                   objects[j].box_at(objects[j].goal_pose)))
        fail("goal poses of " + objects[i].id + " and " + objects[j].id + " overlap");
    }
  }

  // Assembly graph: edges must name known objects (or GROUND) and every
  // object must be reachable from GROUND.
  std::set<std::string> object_ids;
  for (const auto& o : objects) object_ids.insert(o.id);
  std::multimap<std::string, std::string> adj;
  for (const auto& [a, b] : assembly_edges) {
    if (a == b) fail("self edge on '" + a + "'");
    for (const auto& n : {a, b})
      if (n != kGroundId && !object_ids.count(n))
        fail("assembly edge names unknown object '" + n + "'");
    adj.emplace(a, b);
    adj.emplace(b, a);
  }
  std::set<std::string> seen{kGroundId};
  std::vector<std::string> stack{kGroundId};
  while (!stack.empty()) {
    const std::string node = stack.back();
    stack.pop_back();
    auto [lo, hi] = adj.equal_range(node);
    for (auto it = lo; it != hi; ++it)
      if (seen.insert(it->second).second) stack.push_back(it->second);
  }
  for (const auto& o : objects)
    if (!seen.count(o.id)) fail(o.id + " is not connected to GROUND in the assembly graph");
}

Scene Scene::with_agents(int m) const {
  if (m <= 0 || m > robot_count())
    throw std::invalid_argument("scene: agent count out of range");
  Scene s = *this;
  s.robots.resize(static_cast<size_t>(m));
  return s;
}

}  // namespace mra
