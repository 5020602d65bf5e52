#pragma once

#include <vector>

#include "mra/plan_state.hpp"
#include "mra/scene.hpp"

namespace mra {

/// One task assignment. `robot` is the acting robot (the giver for a
/// handover, where `partner` is the receiver).
struct Action {
  ActionKind kind;
  int robot = -1;
  int partner = -1;
  int object = -1;

  bool involves(int r) const { return robot == r || partner == r; }
};

/// A logically valid task sequence that ends with the object placed.
/// Actions are stored in their global precedence order; each action is
/// one mode switch per involved robot.
struct Skeleton {
  std::vector<Action> actions;

  int switch_count() const;
  std::vector<int> robot_switches(int robot) const;  // action indices, in order
  int handover_count() const;
  bool uses_robot(int robot) const;
  std::string describe(const Scene& scene) const;
};

bool operator==(const Skeleton& a, const Skeleton& b);
bool operator<(const Skeleton& a, const Skeleton& b);

/// The limited-horizon task for one object and a robot subset.
struct SubProblem {
  int object = -1;
  std::vector<int> robots;  // sorted
  Skeleton skeleton;
  double earliest_free_time = 0.0;  // min committed horizon over the subset
};

struct SkeletonOptions {
  int max_actions = 8;
  int max_handovers = 1;
};

/// All logically valid skeletons for the robots to deliver the object,
/// in order of increasing action count (ties by robot ids), duplicate
/// free. Single-robot sequences come before handover sequences of equal
/// or greater length.
std::vector<Skeleton> enumerate_skeletons(const std::vector<int>& robots, int object,
                                          const Scene& scene,
                                          const SkeletonOptions& opt = {});

/// Robot holding the object during the approach to `action` (-1: loose).
int holder_before(const Skeleton& sk, int action);

/// Action at which `holder` acquired the object, searching before `action`.
int acquisition_action(const Skeleton& sk, int action, int holder);

}  // namespace mra
