#pragma once

#include <span>

#include "uak/error.hpp"
#include "uak/geom/pose2.hpp"

namespace uak::sim {

UAK_DEFINE_ERROR(PathExhausted);

// Kinematic bicycle plant state.
struct VehicleState {
  geom::Pose2 pose;
  double speed = 0.0;  // [m/s], never negative
  double steer = 0.0;  // [rad], |steer| <= steer_max
  double wheelbase = 2.7;
  geom::Vec2 half_extents{2.3, 0.95};  // half length / half width [m]
  double steer_max = 0.6;              // [rad]
  double steer_rate = 1.0;             // slew limit [rad/s]
};

// Explicit-Euler kinematic bicycle step. The steering command is clamped to
// steer_max and slew-limited before integrating; speed clamps at zero (no
// reverse).
VehicleState step_vehicle(const VehicleState& state, double steer_cmd,
                          double accel_cmd, double dt);

// Pure-pursuit steering toward an explicit target point.
double pure_pursuit_steer(const VehicleState& state, const geom::Vec2& target,
                          double lookahead);

// Pure-pursuit steering toward the path point one lookahead ahead of the
// vehicle's projection. Throws PathExhausted when the path has no point that
// far ahead.
double pure_pursuit_steer(const VehicleState& state,
                          std::span<const geom::Vec2> path, double lookahead);

// Oriented-bounding-box overlap between two vehicle footprints (separating
// axis test on both rectangles' axes).
bool footprints_overlap(const geom::Pose2& pose_a, const geom::Vec2& half_a,
                        const geom::Pose2& pose_b, const geom::Vec2& half_b);

}  // namespace uak::sim
