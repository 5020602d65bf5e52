#include "mra/plan_state.hpp"

#include <algorithm>
#include <stdexcept>

namespace mra {

const char* action_name(ActionKind k) {
  switch (k) {
    case ActionKind::Pick: return "pick";
    case ActionKind::Place: return "place";
    case ActionKind::Retract: return "retract";
    case ActionKind::Handover: return "handover";
  }
  return "?";
}

PlanState PlanState::initial(const Scene& scene) {
  PlanState p;
  p.committed.resize(static_cast<size_t>(scene.entity_count()));
  p.horizon.assign(static_cast<size_t>(scene.entity_count()), 0.0);
  p.events.resize(static_cast<size_t>(scene.robot_count()));
  return p;
}

bool PlanState::is_placed(int object_index) const {
  return std::find(placed.begin(), placed.end(), object_index) != placed.end();
}

Config PlanState::evaluate(const Scene& scene, int entity, double t) const {
  if (entity < 0 || entity >= scene.entity_count())
    throw std::out_of_range("plan_state: unknown entity index");
  const TimedPath& path = committed[static_cast<size_t>(entity)];
  if (path.empty()) {
    if (scene.is_robot(entity)) return scene.robots[static_cast<size_t>(entity)].home_config;
    Config c;
    c.pose = scene.objects[static_cast<size_t>(scene.object_index(entity))].start_pose;
    return c;
  }
  if (scene.is_object(entity)) {
    if (const Attachment* att = path.attachment_at(t)) {
      const Config carrier = evaluate(scene, att->robot, t);
      const Pose2 gripper =
          scene.robots[static_cast<size_t>(att->robot)].gripper_pose(carrier.pose);
      Config c;
      c.pose = gripper.compose(att->grasp);
      return c;
    }
  }
  const Knot k = path.sample(t);
  Config c;
  c.pose = k.pose;
  c.grip = k.grip;
  return c;
}

Config PlanState::evaluate_id(const Scene& scene, const std::string& id, double t) const {
  const int entity = scene.find_entity(id);
  if (entity < 0) throw std::out_of_range("plan_state: unknown entity id '" + id + "'");
  return evaluate(scene, entity, t);
}

int PlanState::carrier_of(const Scene& scene, int object_index, double t) const {
  const TimedPath& path = committed[static_cast<size_t>(scene.object_entity(object_index))];
  if (path.empty()) return -1;
  const Attachment* att = path.attachment_at(t);
  return att ? att->robot : -1;
}

void PlanState::commit(const Scene& scene, int entity, const std::vector<Knot>& knots,
                       const std::optional<Attachment>& attachment) {
  TimedPath& path = committed[static_cast<size_t>(entity)];
  const int base = path.knots.empty() ? 0 : static_cast<int>(path.knots.size()) - 1;
  for (const Knot& k : knots) path.append(k);
  if (attachment) {
    Attachment att = *attachment;
    att.first_knot += base;
    att.last_knot += base;
    path.attachments.push_back(att);
  }
  horizon[static_cast<size_t>(entity)] = path.end_time();
  (void)scene;
}

void PlanState::push_snapshot() {
  PlanState copy = *this;
  copy.snapshots.clear();
  snapshots.push_back(std::make_shared<const PlanState>(std::move(copy)));
}

void PlanState::rewind(int depth) {
  if (depth == 0) return;
  if (depth < 0 || depth > static_cast<int>(snapshots.size()))
    throw std::out_of_range("plan_state: rewind depth exceeds history");
  auto kept =
      std::vector<std::shared_ptr<const PlanState>>(snapshots.begin(), snapshots.end() - depth);
  const auto target = snapshots[snapshots.size() - static_cast<size_t>(depth)];
  *this = *target;
  snapshots = std::move(kept);
}

double PlanState::makespan() const {
  double t = 0.0;
  for (double h : horizon) t = std::max(t, h);
  return t;
}

}  // namespace mra
