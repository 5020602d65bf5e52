#include "mra/plan_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mra/scene_io.hpp"

namespace mra {

namespace {

using nlohmann::json;

json pose_json(const Pose2& p) { return json{{"x", p.x}, {"y", p.y}, {"theta", p.theta}}; }

Pose2 pose_from(const json& j) {
  return Pose2(j.at("x").get<double>(), j.at("y").get<double>(), j.at("theta").get<double>());
}

const char* event_name(ActionKind k) { return action_name(k); }

ActionKind event_kind(const std::string& s) {
  if (s == "pick") return ActionKind::Pick;
  if (s == "place") return ActionKind::Place;
  if (s == "retract") return ActionKind::Retract;
  if (s == "handover") return ActionKind::Handover;
  throw ParseError("plan.events", "unknown action '" + s + "'");
}

}  // namespace

PlanFile make_plan_file(const Scene& scene, const FullPlan& plan, const PlannerConfig& cfg,
                        std::uint64_t seed) {
  PlanFile f;
  f.scene_hash = scene_hash(scene);
  f.seed = seed;
  f.config = cfg;
  f.makespan = plan.makespan;
  f.state = plan.state;
  f.state.snapshots.clear();
  return f;
}

std::string plan_to_json(const Scene& scene, const PlanFile& plan) {
  json j;
  j["scene_hash"] = plan.scene_hash;
  j["seed"] = plan.seed;
  j["config"] = json::parse(config_to_json(plan.config));
  j["makespan"] = plan.makespan;

  json paths = json::object();
  for (int e = 0; e < scene.entity_count(); ++e) {
    const TimedPath& path = plan.state.committed[static_cast<size_t>(e)];
    if (path.empty()) continue;
    json jp;
    jp["knots"] = json::array();
    for (const Knot& k : path.knots) {
      json jk = pose_json(k.pose);
      jk["t"] = k.t;
      jk["grip"] = k.grip;
      jp["knots"].push_back(std::move(jk));
    }
    jp["attachments"] = json::array();
    for (const Attachment& a : path.attachments) {
      json ja = {{"from", a.first_knot},
                 {"to", a.last_knot},
                 {"robot", scene.robots[static_cast<size_t>(a.robot)].id},
                 {"grasp", pose_json(a.grasp)}};
      jp["attachments"].push_back(std::move(ja));
    }
    paths[scene.entity_id(e)] = std::move(jp);
  }
  j["paths"] = std::move(paths);

  json events = json::object();
  for (int r = 0; r < scene.robot_count(); ++r) {
    json je = json::array();
    for (const Event& ev : plan.state.events[static_cast<size_t>(r)]) {
      json jv = {{"action", event_name(ev.kind)},
                 {"object", scene.objects[static_cast<size_t>(ev.object)].id},
                 {"start", ev.start},
                 {"end", ev.end}};
      if (ev.partner >= 0)
        jv["partner"] = scene.robots[static_cast<size_t>(ev.partner)].id;
      je.push_back(std::move(jv));
    }
    events[scene.robots[static_cast<size_t>(r)].id] = std::move(je);
  }
  j["events"] = std::move(events);

  json placed = json::array();
  for (int o : plan.state.placed) placed.push_back(scene.objects[static_cast<size_t>(o)].id);
  j["placed"] = std::move(placed);
  return j.dump(2);
}

void save_plan(const Scene& scene, const PlanFile& plan, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError(path, "cannot write file");
  out << plan_to_json(scene, plan) << "\n";
}

PlannerConfig read_plan_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, "cannot open file");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ParseError(path, e.what());
  }
  if (!j.contains("config")) throw ParseError(path, "missing config echo");
  return parse_config(j["config"].dump(), path + ".config");
}

PlanFile load_plan(const Scene& scene, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, "cannot open file");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ParseError(path, e.what());
  }

  PlanFile f;
  f.scene_hash = j.at("scene_hash").get<std::string>();
  f.seed = j.at("seed").get<std::uint64_t>();
  f.config = parse_config(j.at("config").dump(), path + ".config");
  f.makespan = j.at("makespan").get<double>();
  if (f.scene_hash != scene_hash(scene))
    throw ParseError(path, "scene hash mismatch (wrong or modified scene file)");

  f.state = PlanState::initial(scene);
  for (auto it = j.at("paths").begin(); it != j.at("paths").end(); ++it) {
    const int entity = scene.find_entity(it.key());
    if (entity < 0) throw ParseError(path + ".paths", "unknown entity '" + it.key() + "'");
    TimedPath& tp = f.state.committed[static_cast<size_t>(entity)];
    for (const json& jk : it.value().at("knots")) {
      Knot k;
      k.t = jk.at("t").get<double>();
      k.pose = pose_from(jk);
      k.grip = jk.at("grip").get<bool>();
      tp.knots.push_back(k);
    }
    for (const json& ja : it.value().at("attachments")) {
      Attachment a;
      a.first_knot = ja.at("from").get<int>();
      a.last_knot = ja.at("to").get<int>();
      a.robot = scene.find_robot(ja.at("robot").get<std::string>());
      if (a.robot < 0) throw ParseError(path + ".attachments", "unknown robot");
      a.grasp = pose_from(ja.at("grasp"));
      tp.attachments.push_back(a);
    }
    if (!tp.knots.empty())
      f.state.horizon[static_cast<size_t>(entity)] = tp.end_time();
  }
  for (auto it = j.at("events").begin(); it != j.at("events").end(); ++it) {
    const int robot = scene.find_robot(it.key());
    if (robot < 0) throw ParseError(path + ".events", "unknown robot '" + it.key() + "'");
    for (const json& jv : it.value()) {
      Event ev;
      ev.kind = event_kind(jv.at("action").get<std::string>());
      ev.object = scene.find_object(jv.at("object").get<std::string>());
      ev.start = jv.at("start").get<double>();
      ev.end = jv.at("end").get<double>();
      if (jv.contains("partner"))
        ev.partner = scene.find_robot(jv.at("partner").get<std::string>());
      f.state.events[static_cast<size_t>(robot)].push_back(ev);
    }
  }
  for (const json& jo : j.at("placed")) {
    const int o = scene.find_object(jo.get<std::string>());
    if (o < 0) throw ParseError(path + ".placed", "unknown object");
    f.state.placed.push_back(o);
  }
  return f;
}

}  // namespace mra
