#pragma once

#include <vector>

#include "uak/geom/pose2.hpp"

namespace uak::plan {

// Disc obstacle; velocity supports constant-velocity extrapolation.
struct Obstacle {
  geom::Vec2 position{0.0, 0.0};
  double radius = 0.0;
  geom::Vec2 velocity{0.0, 0.0};
};

struct ClearanceParams {
  double c_max = 10.0;         // clearance beyond which obstacles cost nothing
  double vehicle_width = 1.9;  // [m]
  double margin_extra = 0.3;   // safety slack beyond the half width [m]

  double hard_margin() const { return 0.5 * vehicle_width + margin_extra; }
};

// Distance from a point to the obstacle boundary (negative inside).
double clearance(const geom::Vec2& point, const Obstacle& obstacle);

// Smallest clearance over all obstacles; +inf when there are none.
double min_clearance(const geom::Vec2& point,
                     const std::vector<Obstacle>& obstacles);

// Inverse-clearance barrier: max(0, 1/c - 1/c_max); +inf at c <= 0.
double obstacle_barrier(double clearance_m, double c_max);

}  // namespace uak::plan
