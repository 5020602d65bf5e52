#include "mra/orchestrator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>

namespace mra {

namespace {

using Clock = std::chrono::steady_clock;

struct ScopedTimer {
  Clock::time_point t0 = Clock::now();
  double* bucket;
  explicit ScopedTimer(double* b) : bucket(b) {}
  ~ScopedTimer() { *bucket += std::chrono::duration<double>(Clock::now() - t0).count(); }
};

double position_distance(const Pose2& a, const Pose2& b) {
  return (b.position() - a.position()).norm();
}

KeyframeProblem make_problem(const Scene& scene, const PlanState& plan, const SubProblem& sub,
                             const SwitchTimeSample& times, const PlannerConfig& cfg) {
  KeyframeProblem prob;
  prob.scene = &scene;
  prob.plan = &plan;
  prob.sub = &sub;
  prob.times = times;
  prob.cost.switch_weight = cfg.switch_cost_weight;
  prob.cost.path_weight = cfg.lambda;
  prob.tol = cfg.tol_kf;
  prob.angle_weight = cfg.angle_weight;
  prob.home_park_radius = cfg.home_park_radius;
  return prob;
}

double initial_window(const Scene& scene, const PlanState& plan, const SubProblem& sub) {
  const ObjectSpec& obj = scene.objects[static_cast<size_t>(sub.object)];
  double travel = 0.0;
  for (int r : sub.robots) {
    const RobotSpec& spec = scene.robots[static_cast<size_t>(r)];
    const Pose2 anchor = plan.evaluate(scene, r, 1e18).pose;
    const double d = position_distance(anchor, obj.start_pose) +
                     position_distance(obj.start_pose, obj.goal_pose) +
                     position_distance(obj.goal_pose, spec.home_config.pose);
    travel = std::max(travel, d / spec.v_max);
  }
  return 2.0 * travel + 6.0;
}

// Exact relaxation: the goal footprint must be free of placed parts and
// static obstacles.
enum class GoalFootprint { Free, BlockedByPlaced, BlockedByStatic };

GoalFootprint goal_footprint_state(const Scene& scene, const PlanState& plan, int object) {
  const ObjectSpec& obj = scene.objects[static_cast<size_t>(object)];
  const OrientedBox goal_box = obj.box_at(obj.goal_pose);
  for (const Rect& r : scene.static_obstacles)
    if (overlaps(goal_box, OrientedBox::from_rect(r))) return GoalFootprint::BlockedByStatic;
  for (int p : plan.placed) {
    const ObjectSpec& other = scene.objects[static_cast<size_t>(p)];
    if (overlaps(goal_box, other.box_at(other.goal_pose)))
      return GoalFootprint::BlockedByPlaced;
  }
  return GoalFootprint::Free;
}

class Orchestrator {
 public:
  Orchestrator(const Scene& scene, const PlannerConfig& cfg, std::uint64_t seed, double t_fix)
      : scene_(scene), cfg_(cfg), t_fix_(t_fix), rng_(mix_seed(seed, 0)) {
    plan_ = PlanState::initial(scene_);
    graph_ = AssemblyGraph::from_scene(scene_);
  }

  PlanResult run() {
    const auto t0 = Clock::now();
    PlanResult result;
    const int n = scene_.object_count();
    while (static_cast<int>(plan_.placed.size()) < n) {
      ++step_;
      std::set<int> placed(plan_.placed.begin(), plan_.placed.end());
      const int object = next_object(graph_, scene_, placed);
      bool hard_fail = false;
      if (try_place(object, hard_fail)) continue;
      if (hard_fail) {
        result.failure_reason =
            "goal footprint of " + scene_.objects[static_cast<size_t>(object)].id +
            " blocked by a static obstacle";
        return result;
      }
      // Rewind previous placements with doubling depth until the object fits.
      const int placed0 = static_cast<int>(plan_.placed.size());
      int rewound = 0;
      bool done = false;
      for (int target = 1; target <= placed0 && !done; target *= 2) {
        const int add = std::min(target, placed0) - rewound;
        if (add > 0) {
          plan_.rewind(add);
          rewound = std::min(target, placed0);
          ++backtracks_;
        }
        done = try_place(object, hard_fail);
      }
      if (!done) {
        result.failure_reason = "could not place " +
                                scene_.objects[static_cast<size_t>(object)].id +
                                " after backtracking";
        return result;
      }
    }
    stats_.total_s = std::chrono::duration<double>(Clock::now() - t0).count();
    FullPlan full;
    full.state = plan_;
    full.makespan = plan_.makespan();
    full.stats = stats_;
    full.backtracks = backtracks_;
    result.plan = std::move(full);
    return result;
  }

 private:
  double t_bar(const std::vector<int>& robots) const {
    double t = 1e300;
    for (int r : robots) t = std::min(t, plan_.horizon[static_cast<size_t>(r)]);
    return t;
  }

  bool try_place(int object, bool& hard_fail) {
    hard_fail = false;
    switch (goal_footprint_state(scene_, plan_, object)) {
      case GoalFootprint::BlockedByStatic: hard_fail = true; return false;
      case GoalFootprint::BlockedByPlaced: return false;
      case GoalFootprint::Free: break;
    }

    SkeletonOptions sopt;
    sopt.max_actions = cfg_.skeleton_max_actions;
    sopt.max_handovers = std::max(1, cfg_.max_team - 1);

    const RobotPriorityList prio = prioritize_robots(plan_, scene_, cfg_.max_team);
    std::vector<SubProblem> deferred;
    for (const RobotSubset& subset : prio) {
      for (const Skeleton& skel : enumerate_skeletons(subset.robots, object, scene_, sopt)) {
        SubProblem sub;
        sub.object = object;
        sub.robots = subset.robots;
        sub.skeleton = skel;
        sub.earliest_free_time = t_bar(subset.robots);
        LedgerKey key{object, subset.robots, skel};
        if (ledger_.count(key)) {
          deferred.push_back(sub);
          continue;
        }
        if (attempt(sub)) return true;
        ledger_[key].failures += 1;
        ledger_[key].last_step = step_;
      }
    }
    // Deprioritized revisit of previously infeasible assignments.
    for (SubProblem& sub : deferred) {
      sub.earliest_free_time = t_bar(sub.robots);
      if (attempt(sub)) return true;
      LedgerKey key{sub.object, sub.robots, sub.skeleton};
      ledger_[key].failures += 1;
      ledger_[key].last_step = step_;
    }
    return false;
  }

  std::optional<SwitchTimeSample> fixed_times(const SubProblem& sub, int shift) const {
    double busy = 0.0;
    for (int r : sub.robots) busy = std::max(busy, plan_.horizon[static_cast<size_t>(r)]);
    const long s0 = static_cast<long>(std::floor(busy / t_fix_ + 1e-9)) + shift;
    SwitchTimeSample st;
    st.window = t_fix_ * static_cast<double>(sub.skeleton.actions.size() + 1);
    st.times.resize(sub.skeleton.actions.size());
    for (size_t i = 0; i < sub.skeleton.actions.size(); ++i)
      st.times[i] = static_cast<double>(s0 + 1 + static_cast<long>(i)) * t_fix_;
    return st;
  }

  bool attempt(const SubProblem& sub) {
    const double w0 = initial_window(scene_, plan_, sub);
    for (int round = 0; round < cfg_.time_resamples; ++round) {
      std::optional<SwitchTimeSample> times;
      if (t_fix_ > 0.0) {
        times = fixed_times(sub, round);
      } else {
        const double window =
            w0 * std::pow(2.0, std::min(round, cfg_.window_doublings));
        times = sample_switch_times(sub.earliest_free_time, sub, plan_, scene_, window, rng_);
      }
      if (!times) continue;
      KeyframeProblem prob = make_problem(scene_, plan_, sub, *times, cfg_);
      std::optional<KeyframeSet> ks;
      {
        ScopedTimer timer(&stats_.keyframes_s);
        ++stats_.keyframe_solves;
        ks = solve_keyframes(prob, cfg_.restarts, rng_);
      }
      if (!ks) continue;
      if (plan_segments(sub, *ks)) return true;
    }
    return false;
  }

  // Re-solve the remaining switches with already-executed ones pinned and
  // a widened (or shifted, in fixed-time mode) time embedding.
  std::optional<KeyframeSet> requery_keyframes(
      const SubProblem& sub, const std::map<std::pair<int, int>, Config>& bound_robot,
      const std::map<int, Pose2>& bound_object, const SwitchTimeSample& base_times,
      int widen_round) {
    const Skeleton& sk = sub.skeleton;
    std::set<int> bound_actions;
    for (const auto& [key, cfg] : bound_robot) bound_actions.insert(key.first);

    SwitchTimeSample times = base_times;
    if (t_fix_ > 0.0) {
      for (size_t i = 0; i < sk.actions.size(); ++i)
        if (!bound_actions.count(static_cast<int>(i)))
          times.times[i] += t_fix_ * static_cast<double>(widen_round);
    } else {
      times.window = base_times.window * std::pow(2.0, widen_round);
      const double hi = sub.earliest_free_time + times.window;
      // per-robot draws above the last bound/committed time
      std::map<int, double> lb;
      for (int r : sub.robots) {
        lb[r] = std::max(sub.earliest_free_time, plan_.horizon[static_cast<size_t>(r)]);
        for (int action : sk.robot_switches(r))
          if (bound_actions.count(action))
            lb[r] = std::max(lb[r], base_times.time_of(action));
      }
      for (size_t i = 0; i < sk.actions.size(); ++i) {
        if (bound_actions.count(static_cast<int>(i))) continue;
        const Action& a = sk.actions[i];
        double low = lb[a.robot];
        if (a.kind == ActionKind::Handover) low = std::max(low, lb[a.partner]);
        if (low >= hi) return std::nullopt;
        const double t = uniform_real(rng_, low, hi);
        times.times[i] = t;
        lb[a.robot] = t;
        if (a.kind == ActionKind::Handover) lb[a.partner] = t;
      }
    }

    KeyframeProblem prob = make_problem(scene_, plan_, sub, times, cfg_);
    prob.pinned_robot = bound_robot;
    prob.pinned_object = bound_object;
    ScopedTimer timer(&stats_.keyframes_s);
    ++stats_.keyframe_solves;
    return solve_keyframes(prob, cfg_.restarts, rng_);
  }

  StRrtParams rrt_params(int robot) const {
    StRrtParams p;
    p.dist.lambda = cfg_.lambda;
    p.dist.v_max = scene_.robots[static_cast<size_t>(robot)].v_max;
    p.dist.angle_weight = cfg_.angle_weight;
    p.omega_max = scene_.robots[static_cast<size_t>(robot)].omega_max;
    p.dt_check = cfg_.dt_check;
    return p;
  }

  // Sequentially connects every keyframe of the solved set, staging each
  // robot (and cargo) trajectory; commits everything on success.
  bool plan_segments(const SubProblem& sub, const KeyframeSet& initial) {
    const Skeleton& sk = sub.skeleton;
    const int object_entity = scene_.object_entity(sub.object);

    PlanState stage = plan_;
    stage.push_snapshot();

    KeyframeSet cur = initial;
    std::map<std::pair<int, int>, Config> bound_robot;
    std::map<int, Pose2> bound_object;
    std::map<int, std::pair<Config, double>> last;  // robot -> state, time
    std::map<int, double> event_prev;
    for (int r : sub.robots) {
      const Config c = plan_.evaluate(scene_, r, 1e18);
      const double h = plan_.horizon[static_cast<size_t>(r)];
      last[r] = {c, h};
      event_prev[r] = h;
    }
    std::vector<std::pair<int, Event>> staged_events;

    for (size_t ai = 0; ai < sk.actions.size(); ++ai) {
      const Action& act = sk.actions[ai];
      const int action = static_cast<int>(ai);
      std::vector<int> movers{act.robot};
      if (act.kind == ActionKind::Handover) movers.push_back(act.partner);

      for (int r : movers) {
        const bool carrying = holder_before(sk, action) == r;
        MotionQuery mq;
        mq.robot = r;
        mq.grip = carrying;
        if (carrying) {
          mq.cargo = sub.object;
          mq.cargo_grasp =
              cur.grasp_transform(scene_, sub, acquisition_action(sk, action, r));
        }

        SpaceTimePoint start;
        start.q = last[r].first;
        start.q.grip = carrying;
        start.t = last[r].second;

        CollisionQuery world{&scene_, &stage, cfg_.angle_weight};
        const StRrtParams params = rrt_params(r);

        // goal pool: one entry per consistent keyframe set
        std::vector<KeyframeSet> pool{cur};
        GoalSet goals;
        auto goal_of = [&](const KeyframeSet& ks) {
          SpaceTimePoint g;
          g.q = ks.robot_configs.at({action, r});
          g.q.grip = carrying;
          g.t = ks.times.time_of(action);
          return g;
        };
        goals.points.push_back(goal_of(cur));

        std::optional<StRrtResult> found;
        for (int retry = 0; retry <= cfg_.segment_retries; ++retry) {
          {
            ScopedTimer timer(&stats_.path_s);
            ++stats_.rrt_queries;
            found = st_rrt_connect(world, mq, start, goals, params, cfg_.rrt_budget, rng_);
          }
          if (found) break;
          // widen the arrival-time window and ask for fresh keyframes
          auto more = requery_keyframes(sub, bound_robot, bound_object, cur.times, retry + 1);
          if (more) {
            pool.push_back(*more);
            goals.points.push_back(goal_of(*more));
            ++goals.generation;
          }
        }
        if (!found) return false;
        cur = pool[static_cast<size_t>(found->goal_index)];

        TimedPath path;
        {
          ScopedTimer timer(&stats_.post_s);
          path = shortcut_and_smooth(found->path, world, mq, start.t, cfg_.shortcut_rounds,
                                     params, rng_);
        }
        const double t_arrive = cur.times.time_of(action);
        stage.commit(scene_, r, path.knots);

        if (carrying) {
          const RobotSpec& spec = scene_.robots[static_cast<size_t>(r)];
          const Pose2 from_pose = spec.gripper_pose(start.q.pose).compose(mq.cargo_grasp);
          const Pose2 to_pose =
              spec.gripper_pose(cur.robot_configs.at({action, r}).pose).compose(mq.cargo_grasp);
          std::vector<Knot> knots{{start.t, from_pose, false}, {t_arrive, to_pose, false}};
          Attachment att;
          att.first_knot = 0;
          att.last_knot = 1;
          att.robot = r;
          att.grasp = mq.cargo_grasp;
          stage.commit(scene_, object_entity, knots, att);
        }

        Event ev;
        ev.kind = act.kind;
        ev.object = sub.object;
        ev.partner = (act.kind == ActionKind::Handover)
                         ? (r == act.robot ? act.partner : act.robot)
                         : -1;
        ev.start = event_prev[r];
        ev.end = t_arrive;
        staged_events.emplace_back(r, ev);
        event_prev[r] = t_arrive;

        bound_robot[{action, r}] = cur.robot_configs.at({action, r});
        Config next = cur.robot_configs.at({action, r});
        last[r] = {next, t_arrive};
      }
      if (act.kind == ActionKind::Handover) bound_object[action] = cur.object_poses.at(action);
    }

    for (auto& [r, ev] : staged_events) stage.events[static_cast<size_t>(r)].push_back(ev);
    stage.placed.push_back(sub.object);
    plan_ = std::move(stage);
    return true;
  }

  const Scene& scene_;
  PlannerConfig cfg_;
  double t_fix_ = 0.0;
  Rng rng_;
  PlanState plan_;
  AssemblyGraph graph_;
  InfeasibleLedger ledger_;
  PhaseStats stats_;
  int backtracks_ = 0;
  int step_ = 0;
};

}  // namespace

bool LedgerKey::operator<(const LedgerKey& o) const {
  if (object != o.object) return object < o.object;
  if (robots != o.robots) return robots < o.robots;
  return skeleton < o.skeleton;
}

LowerBound lower_bound_checks(const Scene& scene, const PlanState& plan, const SubProblem& sub,
                              const PlannerConfig& cfg, Rng& rng) {
  switch (goal_footprint_state(scene, plan, sub.object)) {
    case GoalFootprint::BlockedByStatic:
    case GoalFootprint::BlockedByPlaced: return LowerBound::PrunePlacement;
    case GoalFootprint::Free: break;
  }
  const double window = 4.0 * initial_window(scene, plan, sub);
  const auto times =
      sample_switch_times(sub.earliest_free_time, sub, plan, scene, window, rng);
  if (!times) return LowerBound::PruneKeyframes;
  const KeyframeProblem prob = make_problem(scene, plan, sub, *times, cfg);
  if (!solve_keyframes(prob, cfg.restarts, rng)) return LowerBound::PruneKeyframes;
  return LowerBound::Pass;
}

PlanState backtrack(const PlanState& plan, int depth) {
  PlanState out = plan;
  out.rewind(depth);
  return out;
}

Scene effective_scene(const Scene& scene, const PlannerConfig& cfg) {
  Scene s = (cfg.agents > 0) ? scene.with_agents(cfg.agents) : scene;
  if (cfg.v_max_override > 0.0)
    for (auto& r : s.robots) r.v_max = cfg.v_max_override;
  return s;
}

PlanResult plan_assembly(const Scene& scene, const PlannerConfig& cfg, std::uint64_t seed) {
  const Scene eff = effective_scene(scene, cfg);
  eff.validate();
  Orchestrator orch(eff, cfg, seed, 0.0);
  return orch.run();
}

PlanResult plan_assembly_fixed_time(const Scene& scene, const PlannerConfig& cfg,
                                    std::uint64_t seed, double t_fix) {
  const Scene eff = effective_scene(scene, cfg);
  eff.validate();
  Orchestrator orch(eff, cfg, seed, t_fix);
  return orch.run();
}

}  // namespace mra
