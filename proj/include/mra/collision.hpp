#pragma once

#include <map>
#include <vector>

#include "mra/plan_state.hpp"
#include "mra/scene.hpp"

namespace mra {

/// Objects moved explicitly by the caller (typically the cargo of the
/// robot being planned). `carrier` suppresses the cargo/carrier pair.
struct CarriedObject {
  Pose2 pose;
  int carrier = -1;
};

using MovingRobots = std::map<int, Config>;          // robot index -> config
using CarriedObjects = std::map<int, CarriedObject>; // object index -> placement

struct CollisionQuery {
  const Scene* scene = nullptr;
  const PlanState* plan = nullptr;
  double angle_weight = 0.3;
};

/// True iff the moving robots and carried objects are free of overlap
/// against each other, all other entities at their planned poses at time
/// t, and the static obstacles; robot bases must sit inside their
/// operating regions. Touching does not count as overlap.
bool collision_free(const CollisionQuery& q, const MovingRobots& moving,
                    const CarriedObjects& carried, double t);

/// Conservative continuous check of one robot's motion segment: samples
/// every dt_check and inflates all moving shapes by their worst-case
/// displacement between samples.
struct SweepParams {
  double dt_check = 0.05;
};

bool sweep_collision_free(const CollisionQuery& q, int robot,
                          const Config& from, double t1, const Config& to, double t2,
                          const CarriedObjects& carried, const SweepParams& p = {});

/// Minimum separation (negative = penetration) between one robot disc /
/// cargo and the rest of the world at time t; used as a penalty term.
double world_separation(const CollisionQuery& q, const MovingRobots& moving,
                        const CarriedObjects& carried, double t);

}  // namespace mra
