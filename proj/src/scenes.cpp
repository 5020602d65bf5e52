#include "mra/scenes.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace mra {

namespace {

constexpr double kBrickW = 0.36;
constexpr double kBrickH = 0.16;

std::string numbered(const char* prefix, int i, int width) {
  char buf[32];
  if (width == 2)
    snprintf(buf, sizeof(buf), "%s%02d", prefix, i);
  else
    snprintf(buf, sizeof(buf), "%s%03d", prefix, i);
  return buf;
}

ObjectSpec brick(const std::string& id, const Pose2& start, const Pose2& goal) {
  ObjectSpec o;
  o.id = id;
  o.width = kBrickW;
  o.height = kBrickH;
  o.start_pose = start;
  o.goal_pose = goal;
  o.grasp_sites = {{kBrickW / 2, 0.0}, {-kBrickW / 2, 0.0}, {0.0, kBrickH / 2},
                   {0.0, -kBrickH / 2}};
  return o;
}

RobotSpec rover(const std::string& id, const Pose2& home, const Rect& region,
                double v_max = 1.0) {
  RobotSpec r;
  r.id = id;
  r.base_radius = 0.12;
  r.gripper_offset = 0.30;
  r.v_max = v_max;
  r.omega_max = 4.0;
  r.operating_region = region;
  r.home_config.pose = home;
  return r;
}

// Staged parts in south rows, `per_row` apiece.
std::vector<Pose2> staging(int count, int per_row, double y0, double pitch_x,
                           double pitch_y) {
  std::vector<Pose2> out;
  for (int i = 0; i < count; ++i) {
    const int r = i / per_row;
    const int c = i % per_row;
    const double x = (c - (per_row - 1) * 0.5) * pitch_x;
    out.emplace_back(x, y0 - r * pitch_y, 0.0);
  }
  return out;
}

void add_fleet(Scene& s, int robots, double home_y, const Rect& region) {
  for (int i = 0; i < robots; ++i) {
    const double x = (i - (robots - 1) * 0.5) * 0.85;
    // mildly heterogeneous team: alternating speed classes
    const double v = (i % 2 == 0) ? 1.0 : 0.8;
    s.robots.push_back(rover(numbered("r", i, 2), Pose2(x, home_y, kPi / 2), region, v));
  }
}

}  // namespace

Scene make_tower_scene(int robots) {
  Scene s;
  const int n = 15;
  const auto starts = staging(n, 8, -1.3, 0.55, 0.6);
  for (int i = 0; i < n; ++i) {
    const Pose2 goal(0.0, 0.6 + i * 0.26, 0.0);
    s.objects.push_back(brick(numbered("t", i, 2), starts[static_cast<size_t>(i)], goal));
  }
  s.static_obstacles.push_back({{0.68, 0.2}, {1.08, 5.2}});
  s.static_obstacles.push_back({{-1.08, 0.2}, {-0.68, 5.2}});
  add_fleet(s, robots, -2.8, {{-3.6, -3.4}, {3.6, 4.9}});
  s.assembly_edges.emplace_back(kGroundId, "t00");
  for (int i = 1; i < n; ++i)
    s.assembly_edges.emplace_back(numbered("t", i - 1, 2), numbered("t", i, 2));
  return s;
}

Scene make_wall_scene(int robots) {
  Scene s;
  const int rows = 6, cols = 6;
  const auto starts = staging(rows * cols, 12, -1.3, 0.5, 0.6);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const int i = r * cols + c;
      const Pose2 goal(-1.1 + c * 0.44, 0.6 + r * 0.26, 0.0);
      s.objects.push_back(brick(numbered("w", i, 2), starts[static_cast<size_t>(i)], goal));
    }
  }
  add_fleet(s, robots, -3.2, {{-3.6, -3.8}, {3.6, 2.8}});
  for (int c = 0; c < cols; ++c) s.assembly_edges.emplace_back(kGroundId, numbered("w", c, 2));
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const int i = r * cols + c;
      if (c + 1 < cols) s.assembly_edges.emplace_back(numbered("w", i, 2), numbered("w", i + 1, 2));
      if (r + 1 < rows)
        s.assembly_edges.emplace_back(numbered("w", i, 2), numbered("w", i + cols, 2));
    }
  }
  return s;
}

Scene make_well_scene(int robots) {
  Scene s;
  const int rings = 4, per_ring = 13;
  const Vec2 center{0.0, 1.0};
  const auto starts = staging(rings * per_ring, 13, -1.6, 0.5, 0.6);
  for (int k = 0; k < rings; ++k) {
    const double radius = 0.9 + k * 0.34;
    for (int i = 0; i < per_ring; ++i) {
      const int idx = k * per_ring + i;
      const double phi = 2.0 * kPi * i / per_ring;
      const Pose2 goal(center.x + radius * std::cos(phi), center.y + radius * std::sin(phi),
                       phi + kPi / 2);
      s.objects.push_back(brick(numbered("q", idx, 2), starts[static_cast<size_t>(idx)], goal));
    }
  }
  add_fleet(s, robots, -3.9, {{-4.2, -4.5}, {4.2, 3.6}});
  for (int i = 0; i < per_ring; ++i) s.assembly_edges.emplace_back(kGroundId, numbered("q", i, 2));
  for (int k = 0; k < rings; ++k) {
    for (int i = 0; i < per_ring; ++i) {
      const int idx = k * per_ring + i;
      const int next_in_ring = k * per_ring + (i + 1) % per_ring;
      s.assembly_edges.emplace_back(numbered("q", idx, 2), numbered("q", next_in_ring, 2));
      if (k + 1 < rings)
        s.assembly_edges.emplace_back(numbered("q", idx, 2),
                                      numbered("q", idx + per_ring, 2));
    }
  }
  return s;
}

Scene make_pavilion_scene(int robots) {
  Scene s;
  const int cols = 12;
  const int full_rows = 9;
  const int last_row_cols = 5;
  const int last_row_first = 3;
  const int n = full_rows * cols + last_row_cols;  // 113
  const auto starts = staging(n, 20, -1.3, 0.47, 0.6);

  auto cell_index = [&](int r, int c) -> int {
    if (r < full_rows) return r * cols + c;
    if (c >= last_row_first && c < last_row_first + last_row_cols)
      return full_rows * cols + (c - last_row_first);
    return -1;
  };

  int idx = 0;
  for (int r = 0; r <= full_rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (cell_index(r, c) < 0) continue;
      const Pose2 goal(-2.42 + c * 0.44, 0.6 + r * 0.26, 0.0);
      s.objects.push_back(brick(numbered("p", idx, 3), starts[static_cast<size_t>(idx)], goal));
      ++idx;
    }
  }
  add_fleet(s, robots, -5.0, {{-5.2, -5.6}, {5.2, 3.6}});
  for (int c = 0; c < cols; ++c)
    s.assembly_edges.emplace_back(kGroundId, numbered("p", c, 3));
  for (int r = 0; r <= full_rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const int a = cell_index(r, c);
      if (a < 0) continue;
      const int right = (c + 1 < cols) ? cell_index(r, c + 1) : -1;
      const int up = cell_index(r + 1, c);
      if (right >= 0) s.assembly_edges.emplace_back(numbered("p", a, 3), numbered("p", right, 3));
      if (up >= 0) s.assembly_edges.emplace_back(numbered("p", a, 3), numbered("p", up, 3));
    }
  }
  return s;
}

Scene make_split_region_scene() {
  Scene s;
  const int n = 4;
  for (int i = 0; i < n; ++i) {
    const Pose2 start(-3.4 + i * 0.55, 0.9, 0.0);
    const Pose2 goal(1.9 + i * 0.55, 0.9, 0.0);
    s.objects.push_back(brick(numbered("h", i, 2), start, goal));
    s.assembly_edges.emplace_back(kGroundId, numbered("h", i, 2));
  }
  s.robots.push_back(rover("rA", Pose2(-3.6, -1.6, kPi / 2), {{-4.4, -2.2}, {0.05, 2.2}}));
  s.robots.push_back(rover("rB", Pose2(3.6, -1.6, kPi / 2), {{-0.05, -2.2}, {4.4, 2.2}}));
  return s;
}

Scene make_named_scene(const std::string& name) {
  if (name == "tower") return make_tower_scene();
  if (name == "wall") return make_wall_scene();
  if (name == "well") return make_well_scene();
  if (name == "pavilion") return make_pavilion_scene();
  if (name == "split") return make_split_region_scene();
  throw std::invalid_argument("unknown scene '" + name +
                              "' (expected tower|wall|well|pavilion|split)");
}

}  // namespace mra
