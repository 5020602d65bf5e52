#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mra/orchestrator.hpp"
#include "mra/plan_io.hpp"
#include "mra/render.hpp"
#include "mra/scene_io.hpp"
#include "mra/scenes.hpp"
#include "mra/verifier.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitPlanner = 2;
constexpr int kExitVerify = 3;

struct CommonFlags {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int agents = -1;
  double lambda = -1.0;
  double vmax = -1.0;
  int max_team = -1;
  double fixed_time = -1.0;
  int budget = -1;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "planner config JSON");
  cmd->add_option("--seed", f.seed, "rng seed")->each([&](const std::string&) {
    f.seed_set = true;
  });
  cmd->add_option("--agents", f.agents, "use only the first N robots");
  cmd->add_option("--lambda", f.lambda, "path-length vs time weight in (0,1]");
  cmd->add_option("--vmax", f.vmax, "override every robot's speed bound");
  cmd->add_option("--max-team", f.max_team, "largest robot subset per object");
  cmd->add_option("--fixed-time", f.fixed_time, "fixed-slot baseline period T");
  cmd->add_option("--budget", f.budget, "RRT iteration budget per segment");
}

mra::PlannerConfig resolve_config(const CommonFlags& f) {
  mra::PlannerConfig cfg;
  if (!f.config_path.empty()) cfg = mra::load_config(f.config_path);
  if (f.seed_set) cfg.seed = f.seed;
  if (f.agents >= 0) cfg.agents = f.agents;
  if (f.lambda > 0.0) cfg.lambda = f.lambda;
  if (f.vmax > 0.0) cfg.v_max_override = f.vmax;
  if (f.max_team > 0) cfg.max_team = f.max_team;
  if (f.fixed_time >= 0.0) cfg.fixed_time = f.fixed_time;
  if (f.budget > 0) cfg.rrt_budget = f.budget;
  return cfg;
}

void print_timing(const mra::PhaseStats& s) {
  printf("phase              time [s]\n");
  printf("keyframes-opt      %8.2f\n", s.keyframes_s);
  printf("path-planning      %8.2f\n", s.path_s);
  printf("post-processing    %8.2f\n", s.post_s);
  printf("total              %8.2f\n", s.total_s);
}

int run_plan(const std::string& scene_path, const CommonFlags& flags,
             const std::string& out_path) {
  const mra::PlannerConfig cfg = resolve_config(flags);
  const mra::Scene raw = mra::load_scene(scene_path);
  const mra::Scene scene = mra::effective_scene(raw, cfg);

  const mra::PlanResult result =
      cfg.fixed_time > 0.0
          ? mra::plan_assembly_fixed_time(raw, cfg, cfg.seed, cfg.fixed_time)
          : mra::plan_assembly(raw, cfg, cfg.seed);
  if (!result.ok()) {
    std::cerr << "planning failed: " << result.failure_reason << "\n";
    return kExitPlanner;
  }
  const mra::FullPlan& plan = *result.plan;
  print_timing(plan.stats);
  printf("makespan           %8.2f s\n", plan.makespan);
  printf("objects placed     %8zu\n", plan.state.placed.size());
  printf("backtracks         %8d\n", plan.backtracks);
  if (!out_path.empty()) {
    const mra::PlanFile file = mra::make_plan_file(scene, plan, cfg, cfg.seed);
    mra::save_plan(scene, file, out_path);
    printf("plan written to %s\n", out_path.c_str());
  }
  return kExitOk;
}

int run_verify(const std::string& plan_path, const std::string& scene_path, double dt) {
  const mra::PlannerConfig cfg = mra::read_plan_config(plan_path);
  const mra::Scene scene = mra::effective_scene(mra::load_scene(scene_path), cfg);
  const mra::PlanFile file = mra::load_plan(scene, plan_path);
  const mra::VerifyReport report = mra::verify_plan(scene, file.state, dt, cfg.angle_weight);
  if (report.empty()) {
    printf("verify: ok (dt=%g)\n", dt);
    return kExitOk;
  }
  printf("verify: %s\n", report.summary().c_str());
  return kExitVerify;
}

int run_compare(const std::string& scene_path, const std::vector<int>& agent_counts,
                const std::vector<std::uint64_t>& seeds, const CommonFlags& flags,
                const std::string& out_path, bool with_fixed) {
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!out_path.empty()) {
    file.open(out_path, std::ios::app);
    if (!file) {
      std::cerr << "cannot open " << out_path << "\n";
      return kExitInput;
    }
    out = &file;
  }
  const mra::Scene raw = mra::load_scene(scene_path);
  (*out) << "scenario,m,seed,variant,status,makespan,compute_keyframes,compute_path,"
            "compute_post,total\n";

  std::map<std::pair<int, std::string>, std::vector<double>> makespans;
  for (int m : agent_counts) {
    for (std::uint64_t seed : seeds) {
      std::vector<std::pair<std::string, double>> variants{{"variable", 0.0}};
      if (with_fixed) variants.push_back({"fixed", flags.fixed_time});
      for (const auto& [variant, t_fix] : variants) {
        mra::PlannerConfig cfg = resolve_config(flags);
        cfg.agents = m;
        cfg.seed = seed;
        cfg.fixed_time = t_fix;
        const mra::PlanResult result =
            t_fix > 0.0 ? mra::plan_assembly_fixed_time(raw, cfg, seed, t_fix)
                        : mra::plan_assembly(raw, cfg, seed);
        if (result.ok()) {
          const mra::FullPlan& p = *result.plan;
          char line[256];
          snprintf(line, sizeof(line), "%s,%d,%llu,%s,ok,%.6f,%.3f,%.3f,%.3f,%.3f\n",
                   scene_path.c_str(), m, static_cast<unsigned long long>(seed),
                   variant.c_str(), p.makespan, p.stats.keyframes_s, p.stats.path_s,
                   p.stats.post_s, p.stats.total_s);
          (*out) << line;
          makespans[{m, variant}].push_back(p.makespan);
        } else {
          (*out) << scene_path << "," << m << "," << seed << "," << variant
                 << ",failed,,,,,\n";
        }
      }
    }
  }

  // aggregated speedups vs the single-robot mean
  const auto base = makespans.find({1, "variable"});
  if (base != makespans.end() && !base->second.empty()) {
    double base_mean = 0.0;
    for (double v : base->second) base_mean += v;
    base_mean /= static_cast<double>(base->second.size());
    for (const auto& [key, vals] : makespans) {
      if (vals.empty() || key.second != "variable") continue;
      double mean = 0.0;
      for (double v : vals) mean += v;
      mean /= static_cast<double>(vals.size());
      printf("speedup m=%d: %.3f\n", key.first, base_mean / mean);
    }
  }
  return kExitOk;
}

int run_render(const std::string& plan_path, const std::string& scene_path,
               const std::string& out_dir, const std::string& mode, double frame_dt) {
  const mra::PlannerConfig cfg = mra::read_plan_config(plan_path);
  const mra::Scene scene = mra::effective_scene(mra::load_scene(scene_path), cfg);
  const mra::PlanFile file = mra::load_plan(scene, plan_path);
  const int n = mra::render_to_dir(scene, file.state, out_dir, mode, frame_dt);
  printf("wrote %d file(s) to %s\n", n, out_dir.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-robot assembly planner"};
  app.require_subcommand(1);

  // plan
  auto* plan_cmd = app.add_subcommand("plan", "plan a scene and write the result");
  std::string scene_path, out_path;
  CommonFlags plan_flags;
  plan_cmd->add_option("scene", scene_path, "scene JSON")->required();
  plan_cmd->add_option("--out", out_path, "output plan JSON");
  add_common(plan_cmd, plan_flags);

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "re-simulate and check a plan");
  std::string v_plan, v_scene;
  double v_dt = 0.005;
  verify_cmd->add_option("plan", v_plan, "plan JSON")->required();
  verify_cmd->add_option("scene", v_scene, "scene JSON")->required();
  verify_cmd->add_option("--dt", v_dt, "re-simulation resolution [s]");

  // compare
  auto* cmp_cmd = app.add_subcommand("compare", "sweep team sizes and seeds, emit CSV");
  std::string c_scene, c_out;
  std::vector<int> c_agents{1};
  std::vector<std::uint64_t> c_seeds{1};
  bool c_fixed = false;
  CommonFlags cmp_flags;
  cmp_cmd->add_option("scene", c_scene, "scene JSON")->required();
  cmp_cmd->add_option("--agents-list", c_agents, "team sizes to sweep");
  cmp_cmd->add_option("--seeds", c_seeds, "seeds to sweep");
  cmp_cmd->add_flag("--with-fixed", c_fixed, "also run the fixed-time baseline");
  cmp_cmd->add_option("--out", c_out, "append CSV here instead of stdout");
  add_common(cmp_cmd, cmp_flags);

  // render
  auto* render_cmd = app.add_subcommand("render", "draw a plan as SVG");
  std::string r_plan, r_scene, r_out = "render", r_mode = "gantt";
  double r_dt = 0.5;
  render_cmd->add_option("plan", r_plan, "plan JSON")->required();
  render_cmd->add_option("scene", r_scene, "scene JSON")->required();
  render_cmd->add_option("--out", r_out, "output directory");
  render_cmd->add_option("--mode", r_mode, "gantt | frames");
  render_cmd->add_option("--dt", r_dt, "frame spacing [s]");

  // gen-scene
  auto* gen_cmd = app.add_subcommand("gen-scene", "write a bundled benchmark scene");
  std::string g_name, g_out;
  gen_cmd->add_option("name", g_name, "tower | wall | well | pavilion | split")->required();
  gen_cmd->add_option("--out", g_out, "output scene JSON")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (plan_cmd->parsed()) return run_plan(scene_path, plan_flags, out_path);
    if (verify_cmd->parsed()) return run_verify(v_plan, v_scene, v_dt);
    if (cmp_cmd->parsed())
      return run_compare(c_scene, c_agents, c_seeds, cmp_flags, c_out, c_fixed);
    if (render_cmd->parsed()) return run_render(r_plan, r_scene, r_out, r_mode, r_dt);
    if (gen_cmd->parsed()) {
      mra::save_scene(mra::make_named_scene(g_name), g_out);
      printf("scene written to %s\n", g_out.c_str());
      return kExitOk;
    }
  } catch (const mra::ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
