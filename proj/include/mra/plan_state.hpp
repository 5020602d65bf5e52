#pragma once

#include <memory>
#include <string>
#include <vector>

#include "mra/scene.hpp"
#include "mra/timed_path.hpp"

namespace mra {

enum class ActionKind { Pick, Place, Retract, Handover };

const char* action_name(ActionKind k);

/// One scheduled task interval of a robot.
struct Event {
  ActionKind kind;
  int object = -1;
  int partner = -1;  // receiving robot for a giver's handover, giver for the receiver
  double start = 0.0;
  double end = 0.0;
};

/// The growing global plan: committed trajectories per entity, the times
/// up to which they are committed, and the placement history. Snapshots
/// support rewinding placements.
struct PlanState {
  std::vector<TimedPath> committed;        // indexed by entity
  std::vector<double> horizon;             // last committed time, 0 if none
  std::vector<int> placed;                 // object indices in placement order
  std::vector<std::vector<Event>> events;  // per robot
  std::vector<std::shared_ptr<const PlanState>> snapshots;

  static PlanState initial(const Scene& scene);

  bool is_placed(int object_index) const;

  /// Pose (and grip, for robots) of an entity at time t: committed motion
  /// while t is inside the path, clamped ends outside, rest pose when the
  /// entity has no plan. Attached object ranges follow the carrier.
  Config evaluate(const Scene& scene, int entity, double t) const;

  /// evaluate() by entity id; throws std::out_of_range on unknown ids.
  Config evaluate_id(const Scene& scene, const std::string& id, double t) const;

  /// Robot carrying the object at time t, or -1.
  int carrier_of(const Scene& scene, int object_index, double t) const;

  /// Append knots to an entity's path; first knot may coincide with the
  /// current end. Updates the horizon.
  void commit(const Scene& scene, int entity, const std::vector<Knot>& knots,
              const std::optional<Attachment>& attachment = std::nullopt);

  void push_snapshot();

  /// Restore the snapshot from `depth` placements ago (depth 0 is a no-op).
  /// Throws std::out_of_range when depth exceeds the history.
  void rewind(int depth);

  double makespan() const;
};

}  // namespace mra
