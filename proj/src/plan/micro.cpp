#include "uak/plan/micro.hpp"

#include <cmath>
#include <limits>

#include "uak/geom/polyline.hpp"

namespace uak::plan {

bool primitive_clear(const MotionPrimitive& prim,
                     const std::vector<Obstacle>& obstacles,
                     const ClearanceParams& cp) {
  for (const auto& s : prim.samples) {
    if (min_clearance(s, obstacles) < cp.hard_margin()) return false;
  }
  return true;
}

double micro_cost(const MotionPrimitive& prim,
                  const std::vector<Obstacle>& obstacles,
                  const MotionPrimitive* prev, const MicroWeights& w,
                  const ClearanceParams& cp) {
  double arc = 0.0;
  for (std::size_t i = 1; i < prim.samples.size(); ++i) {
    arc += (prim.samples[i] - prim.samples[i - 1]).norm();
  }

  double barrier = 0.0;
  for (const auto& s : prim.samples) {
    barrier += obstacle_barrier(min_clearance(s, obstacles), cp.c_max);
  }

  double curvature = 0.0;
  for (std::size_t i = 1; i + 1 < prim.samples.size(); ++i) {
    curvature += std::abs(geom::three_point_curvature(
        prim.samples[i - 1], prim.samples[i], prim.samples[i + 1]));
  }

  double transient = 0.0;
  if (prev != nullptr && prev->samples.size() >= 2 &&
      !prim.samples.empty()) {
    double sum = 0.0;
    for (const auto& s : prim.samples) {
      sum += geom::distance_to_polyline(prev->samples, s);
    }
    transient = sum / static_cast<double>(prim.samples.size());
  }

  return arc + w.w_obstacle * barrier + w.w_curvature * curvature +
         w.w_transient * transient;
}

MotionPrimitive select_micro(const std::vector<MotionPrimitive>& primitives,
                             const std::vector<Obstacle>& obstacles,
                             const MotionPrimitive* prev,
                             const MicroWeights& w,
                             const ClearanceParams& cp) {
  int best = -1;
  double best_cost = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < primitives.size(); ++i) {
    if (!primitive_clear(primitives[i], obstacles, cp)) continue;
    const double cost = micro_cost(primitives[i], obstacles, prev, w, cp);
    if (cost < best_cost) {
      best_cost = cost;
      best = static_cast<int>(i);
    }
  }
  if (best < 0) {
    throw AllPrimitivesBlocked("no collision-free primitive in the set");
  }
  return primitives[best];
}

}  // namespace uak::plan
