#include "uak/plan/obstacle.hpp"

#include <limits>

namespace uak::plan {

double clearance(const geom::Vec2& point, const Obstacle& obstacle) {
  return (point - obstacle.position).norm() - obstacle.radius;
}

double min_clearance(const geom::Vec2& point,
                     const std::vector<Obstacle>& obstacles) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& obstacle : obstacles) {
    best = std::min(best, clearance(point, obstacle));
  }
  return best;
}

double obstacle_barrier(double clearance_m, double c_max) {
  if (clearance_m <= 0.0) return std::numeric_limits<double>::infinity();
  return std::max(0.0, 1.0 / clearance_m - 1.0 / c_max);
}

}  // namespace uak::plan
