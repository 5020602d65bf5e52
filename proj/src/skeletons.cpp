#include "mra/skeletons.hpp"

#include <deque>
#include <tuple>

namespace mra {

namespace {

std::tuple<int, int, int, int> action_key(const Action& a) {
  return {static_cast<int>(a.kind), a.robot, a.partner, a.object};
}

}  // namespace

int Skeleton::switch_count() const {
  int n = 0;
  for (const Action& a : actions) n += (a.kind == ActionKind::Handover) ? 2 : 1;
  return n;
}

std::vector<int> Skeleton::robot_switches(int robot) const {
  std::vector<int> out;
  for (size_t i = 0; i < actions.size(); ++i)
    if (actions[i].involves(robot)) out.push_back(static_cast<int>(i));
  return out;
}

int Skeleton::handover_count() const {
  int n = 0;
  for (const Action& a : actions) n += a.kind == ActionKind::Handover;
  return n;
}

bool Skeleton::uses_robot(int robot) const {
  for (const Action& a : actions)
    if (a.involves(robot)) return true;
  return false;
}

std::string Skeleton::describe(const Scene& scene) const {
  std::string s;
  for (const Action& a : actions) {
    if (!s.empty()) s += " ";
    s += action_name(a.kind);
    s += "[" + scene.robots[static_cast<size_t>(a.robot)].id;
    if (a.kind == ActionKind::Handover)
      s += "->" + scene.robots[static_cast<size_t>(a.partner)].id;
    s += "]";
  }
  return s;
}

bool operator==(const Skeleton& a, const Skeleton& b) {
  if (a.actions.size() != b.actions.size()) return false;
  for (size_t i = 0; i < a.actions.size(); ++i)
    if (action_key(a.actions[i]) != action_key(b.actions[i])) return false;
  return true;
}

bool operator<(const Skeleton& a, const Skeleton& b) {
  std::vector<std::tuple<int, int, int, int>> ka, kb;
  for (const Action& x : a.actions) ka.push_back(action_key(x));
  for (const Action& x : b.actions) kb.push_back(action_key(x));
  return ka < kb;
}

int holder_before(const Skeleton& sk, int action) {
  int holder = -1;
  for (int i = 0; i < action; ++i) {
    const Action& a = sk.actions[static_cast<size_t>(i)];
    if (a.kind == ActionKind::Pick) holder = a.robot;
    if (a.kind == ActionKind::Handover) holder = a.partner;
    if (a.kind == ActionKind::Place) holder = -1;
  }
  return holder;
}

int acquisition_action(const Skeleton& sk, int action, int holder) {
  int acq = -1;
  for (int i = 0; i < action; ++i) {
    const Action& a = sk.actions[static_cast<size_t>(i)];
    if (a.kind == ActionKind::Pick && a.robot == holder) acq = i;
    if (a.kind == ActionKind::Handover && a.partner == holder) acq = i;
  }
  return acq;
}

std::vector<Skeleton> enumerate_skeletons(const std::vector<int>& robots, int object,
                                          const Scene& scene, const SkeletonOptions& opt) {
  (void)scene;
  struct Node {
    int holder = -1;        // -1 at rest, >=0 held by robot
    int pending_retract = -1;  // robot that must retract next
    bool placed = false;
    int handovers = 0;
    std::vector<Action> seq;
  };

  std::vector<Skeleton> out;
  std::deque<Node> queue;
  queue.push_back({});

  while (!queue.empty()) {
    Node n = queue.front();
    queue.pop_front();
    if (static_cast<int>(n.seq.size()) >= opt.max_actions && !n.placed) continue;

    if (n.placed && n.pending_retract < 0) {
      Skeleton s;
      s.actions = n.seq;
      out.push_back(std::move(s));
      continue;
    }

    auto push_child = [&](ActionKind kind, int robot, int partner, Node base) {
      Action a;
      a.kind = kind;
      a.robot = robot;
      a.partner = partner;
      a.object = object;
      base.seq.push_back(a);
      queue.push_back(std::move(base));
    };

    if (n.pending_retract >= 0) {
      Node child = n;
      child.pending_retract = -1;
      push_child(ActionKind::Retract, n.pending_retract, -1, std::move(child));
      continue;
    }
    if (n.holder < 0 && !n.placed) {
      for (int r : robots) {
        Node child = n;
        child.holder = r;
        push_child(ActionKind::Pick, r, -1, std::move(child));
      }
      continue;
    }
    if (n.holder >= 0) {
      {
        Node child = n;
        child.placed = true;
        child.pending_retract = n.holder;
        child.holder = -1;
        push_child(ActionKind::Place, n.holder, -1, std::move(child));
      }
      if (n.handovers < opt.max_handovers) {
        for (int v : robots) {
          if (v == n.holder) continue;
          Node child = n;
          child.holder = v;
          child.handovers = n.handovers + 1;
          push_child(ActionKind::Handover, n.holder, v, std::move(child));
        }
      }
    }
  }
  return out;
}

}  // namespace mra
