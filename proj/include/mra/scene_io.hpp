#pragma once

#include <string>

#include "mra/orchestrator.hpp"
#include "mra/scene.hpp"

namespace mra {

/// Raised on malformed input files; `where` is a JSON-pointer-ish path.
struct ParseError : std::runtime_error {
  std::string where;
  ParseError(const std::string& where_, const std::string& what_)
      : std::runtime_error(where_ + ": " + what_), where(where_) {}
};

/// Strict loader: unknown keys are rejected with their location.
Scene load_scene(const std::string& path);
Scene parse_scene(const std::string& text, const std::string& origin = "scene");
void save_scene(const Scene& scene, const std::string& path);
std::string scene_to_json(const Scene& scene);

/// FNV-1a over the canonical serialization; stable across load/save.
std::string scene_hash(const Scene& scene);

/// All fields optional; defaults match PlannerConfig{}.
PlannerConfig load_config(const std::string& path);
PlannerConfig parse_config(const std::string& text, const std::string& origin = "config");
std::string config_to_json(const PlannerConfig& cfg);

}  // namespace mra
