#include "mra/scene_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace mra {

namespace {

using nlohmann::json;

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, "cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path, e.what());
  }
}

void expect_keys(const json& j, const std::string& where,
                 const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ParseError(where, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw ParseError(where, "unknown key '" + it.key() + "'");
}

double get_number(const json& j, const std::string& where, const std::string& key) {
  if (!j.contains(key)) throw ParseError(where, "missing key '" + key + "'");
  if (!j[key].is_number()) throw ParseError(where + "." + key, "expected a number");
  return j[key].get<double>();
}

std::string get_string(const json& j, const std::string& where, const std::string& key) {
  if (!j.contains(key)) throw ParseError(where, "missing key '" + key + "'");
  if (!j[key].is_string()) throw ParseError(where + "." + key, "expected a string");
  return j[key].get<std::string>();
}

Pose2 parse_pose(const json& j, const std::string& where) {
  expect_keys(j, where, {"x", "y", "theta"});
  return Pose2(get_number(j, where, "x"), get_number(j, where, "y"),
               get_number(j, where, "theta"));
}

Vec2 parse_vec(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ParseError(where, "expected [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

Rect parse_rect(const json& j, const std::string& where) {
  expect_keys(j, where, {"min", "max"});
  if (!j.contains("min") || !j.contains("max"))
    throw ParseError(where, "expected min/max corners");
  return {parse_vec(j["min"], where + ".min"), parse_vec(j["max"], where + ".max")};
}

json pose_json(const Pose2& p) {
  return json{{"x", p.x}, {"y", p.y}, {"theta", p.theta}};
}

json rect_json(const Rect& r) {
  return json{{"min", {r.lo.x, r.lo.y}}, {"max", {r.hi.x, r.hi.y}}};
}

}  // namespace

Scene parse_scene(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(origin, e.what());
  }
  expect_keys(j, origin, {"objects", "robots", "static_obstacles", "assembly_edges"});
  for (const char* key : {"objects", "robots", "static_obstacles", "assembly_edges"})
    if (!j.contains(key) || !j[key].is_array())
      throw ParseError(origin, std::string("missing array '") + key + "'");

  Scene scene;
  int idx = 0;
  for (const json& jo : j["objects"]) {
    const std::string where = origin + ".objects[" + std::to_string(idx++) + "]";
    expect_keys(jo, where, {"id", "width", "height", "start", "goal", "grasp_sites"});
    ObjectSpec o;
    o.id = get_string(jo, where, "id");
    o.width = get_number(jo, where, "width");
    o.height = get_number(jo, where, "height");
    if (!jo.contains("start") || !jo.contains("goal"))
      throw ParseError(where, "missing start/goal pose");
    o.start_pose = parse_pose(jo["start"], where + ".start");
    o.goal_pose = parse_pose(jo["goal"], where + ".goal");
    if (!jo.contains("grasp_sites") || !jo["grasp_sites"].is_array())
      throw ParseError(where, "missing grasp_sites");
    int s = 0;
    for (const json& js : jo["grasp_sites"])
      o.grasp_sites.push_back(
          parse_vec(js, where + ".grasp_sites[" + std::to_string(s++) + "]"));
    scene.objects.push_back(std::move(o));
  }
  idx = 0;
  for (const json& jr : j["robots"]) {
    const std::string where = origin + ".robots[" + std::to_string(idx++) + "]";
    expect_keys(jr, where,
                {"id", "base_radius", "gripper_offset", "v_max", "omega_max",
                 "operating_region", "home"});
    RobotSpec r;
    r.id = get_string(jr, where, "id");
    r.base_radius = get_number(jr, where, "base_radius");
    r.gripper_offset = get_number(jr, where, "gripper_offset");
    r.v_max = get_number(jr, where, "v_max");
    r.omega_max = get_number(jr, where, "omega_max");
    if (!jr.contains("operating_region") || !jr.contains("home"))
      throw ParseError(where, "missing operating_region/home");
    r.operating_region = parse_rect(jr["operating_region"], where + ".operating_region");
    r.home_config.pose = parse_pose(jr["home"], where + ".home");
    scene.robots.push_back(std::move(r));
  }
  idx = 0;
  for (const json& js : j["static_obstacles"])
    scene.static_obstacles.push_back(
        parse_rect(js, origin + ".static_obstacles[" + std::to_string(idx++) + "]"));
  idx = 0;
  for (const json& je : j["assembly_edges"]) {
    const std::string where = origin + ".assembly_edges[" + std::to_string(idx++) + "]";
    if (!je.is_array() || je.size() != 2 || !je[0].is_string() || !je[1].is_string())
      throw ParseError(where, "expected [\"a\", \"b\"]");
    scene.assembly_edges.emplace_back(je[0].get<std::string>(), je[1].get<std::string>());
  }
  scene.validate();
  return scene;
}

Scene load_scene(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scene(ss.str(), path);
}

std::string scene_to_json(const Scene& scene) {
  json j;
  j["objects"] = json::array();
  for (const ObjectSpec& o : scene.objects) {
    json jo{{"id", o.id},     {"width", o.width},          {"height", o.height},
            {"start", pose_json(o.start_pose)}, {"goal", pose_json(o.goal_pose)}};
    jo["grasp_sites"] = json::array();
    for (const Vec2& s : o.grasp_sites) jo["grasp_sites"].push_back({s.x, s.y});
    j["objects"].push_back(std::move(jo));
  }
  j["robots"] = json::array();
  for (const RobotSpec& r : scene.robots) {
    j["robots"].push_back(json{{"id", r.id},
                               {"base_radius", r.base_radius},
                               {"gripper_offset", r.gripper_offset},
                               {"v_max", r.v_max},
                               {"omega_max", r.omega_max},
                               {"operating_region", rect_json(r.operating_region)},
                               {"home", pose_json(r.home_config.pose)}});
  }
  j["static_obstacles"] = json::array();
  for (const Rect& r : scene.static_obstacles) j["static_obstacles"].push_back(rect_json(r));
  j["assembly_edges"] = json::array();
  for (const auto& [a, b] : scene.assembly_edges) j["assembly_edges"].push_back({a, b});
  return j.dump(2);
}

void save_scene(const Scene& scene, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError(path, "cannot write file");
  out << scene_to_json(scene) << "\n";
}

std::string scene_hash(const Scene& scene) {
  const std::string dump = scene_to_json(scene);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

void read_opt(const json& j, const char* key, double& out) {
  if (j.contains(key)) out = j[key].get<double>();
}
void read_opt(const json& j, const char* key, int& out) {
  if (j.contains(key)) out = j[key].get<int>();
}
void read_opt(const json& j, const char* key, std::uint64_t& out) {
  if (j.contains(key)) out = j[key].get<std::uint64_t>();
}

}  // namespace

PlannerConfig parse_config(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(origin, e.what());
  }
  expect_keys(j, origin,
              {"seed", "agents", "lambda", "v_max", "max_team", "restarts", "time_resamples",
               "window_doublings", "rrt_budget", "shortcut_rounds", "segment_retries",
               "skeleton_max_actions", "tol_kf", "dt_check", "verify_dt", "fixed_time",
               "home_park_radius"});
  PlannerConfig cfg;
  read_opt(j, "seed", cfg.seed);
  read_opt(j, "agents", cfg.agents);
  read_opt(j, "lambda", cfg.lambda);
  read_opt(j, "v_max", cfg.v_max_override);
  read_opt(j, "max_team", cfg.max_team);
  read_opt(j, "restarts", cfg.restarts);
  read_opt(j, "time_resamples", cfg.time_resamples);
  read_opt(j, "window_doublings", cfg.window_doublings);
  read_opt(j, "rrt_budget", cfg.rrt_budget);
  read_opt(j, "shortcut_rounds", cfg.shortcut_rounds);
  read_opt(j, "segment_retries", cfg.segment_retries);
  read_opt(j, "skeleton_max_actions", cfg.skeleton_max_actions);
  read_opt(j, "tol_kf", cfg.tol_kf);
  read_opt(j, "dt_check", cfg.dt_check);
  read_opt(j, "verify_dt", cfg.verify_dt);
  read_opt(j, "fixed_time", cfg.fixed_time);
  read_opt(j, "home_park_radius", cfg.home_park_radius);
  if (cfg.lambda <= 0.0 || cfg.lambda > 1.0)
    throw ParseError(origin + ".lambda", "must be in (0, 1]");
  if (cfg.max_team < 1) throw ParseError(origin + ".max_team", "must be >= 1");
  return cfg;
}

PlannerConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

std::string config_to_json(const PlannerConfig& cfg) {
  json j{{"seed", cfg.seed},
         {"agents", cfg.agents},
         {"lambda", cfg.lambda},
         {"v_max", cfg.v_max_override},
         {"max_team", cfg.max_team},
         {"restarts", cfg.restarts},
         {"time_resamples", cfg.time_resamples},
         {"window_doublings", cfg.window_doublings},
         {"rrt_budget", cfg.rrt_budget},
         {"shortcut_rounds", cfg.shortcut_rounds},
         {"segment_retries", cfg.segment_retries},
         {"skeleton_max_actions", cfg.skeleton_max_actions},
         {"tol_kf", cfg.tol_kf},
         {"dt_check", cfg.dt_check},
         {"verify_dt", cfg.verify_dt},
         {"fixed_time", cfg.fixed_time},
         {"home_park_radius", cfg.home_park_radius}};
  return j.dump(2);
}

}  // namespace mra
