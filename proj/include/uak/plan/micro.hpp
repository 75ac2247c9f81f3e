#pragma once

#include "uak/plan/primitive.hpp"

namespace uak::plan {

UAK_DEFINE_ERROR(AllPrimitivesBlocked);

struct MicroWeights {
  double w_obstacle = 1.0;
  double w_curvature = 1.0;
  double w_transient = 1.0;
};

// Scores every candidate with total arc length plus the weighted obstacle
// barrier, sampled curvature, and mean distance to the previous primitive,
// then returns the cheapest collision-free one (lowest index on exact
// ties). Candidates with any sample inside the hard margin of an obstacle
// are excluded; throws AllPrimitivesBlocked when none survive.
MotionPrimitive select_micro(const std::vector<MotionPrimitive>& primitives,
                             const std::vector<Obstacle>& obstacles,
                             const MotionPrimitive* prev,
                             const MicroWeights& w,
                             const ClearanceParams& cp = {});

// Cost of a single candidate under the same scoring; exposed for the debug
// dump and for exhaustive verification.
double micro_cost(const MotionPrimitive& prim,
                  const std::vector<Obstacle>& obstacles,
                  const MotionPrimitive* prev, const MicroWeights& w,
                  const ClearanceParams& cp = {});

// True when every sample keeps at least the hard margin from every obstacle.
bool primitive_clear(const MotionPrimitive& prim,
                     const std::vector<Obstacle>& obstacles,
                     const ClearanceParams& cp = {});

}  // namespace uak::plan
