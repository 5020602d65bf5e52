#pragma once

#include "mra/scene.hpp"

namespace mra {

/// Procedurally built benchmark worlds. Each ships more robots than the
/// experiments use; runs subset them via the agents option.

/// 15 parts stacked into a single column behind a narrow access lane;
/// strictly sequential support chain.
Scene make_tower_scene(int robots = 8);

/// 36 parts in a 6x6 bond; wide build front, separable work.
Scene make_wall_scene(int robots = 8);

/// 52 parts in four concentric rings, built inside-out.
Scene make_well_scene(int robots = 8);

/// 113 parts in a rectangular shell grid; long-horizon case.
Scene make_pavilion_scene(int robots = 8);

/// Two robots with disjoint reach; all goals lie outside the picker's
/// region, so every delivery needs a handover at the seam.
Scene make_split_region_scene();

/// Scene lookup by name ("tower", "wall", "well", "pavilion", "split").
Scene make_named_scene(const std::string& name);

}  // namespace mra
