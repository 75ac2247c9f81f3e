#include "uak/sim/vehicle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "uak/geom/polyline.hpp"

namespace uak::sim {

VehicleState step_vehicle(const VehicleState& state, double steer_cmd,
                          double accel_cmd, double dt) {
  VehicleState next = state;

  const double target = std::clamp(steer_cmd, -state.steer_max,
                                   state.steer_max);
  const double max_delta = state.steer_rate * dt;
  next.steer =
      state.steer + std::clamp(target - state.steer, -max_delta, max_delta);

  const double c = std::cos(state.pose.theta);
  const double s = std::sin(state.pose.theta);
  next.pose.x = state.pose.x + state.speed * c * dt;
  next.pose.y = state.pose.y + state.speed * s * dt;
  next.pose.theta = geom::normalize_angle(
      state.pose.theta +
      state.speed / state.wheelbase * std::tan(next.steer) * dt);
  next.speed = std::max(0.0, state.speed + accel_cmd * dt);
  return next;
}

double pure_pursuit_steer(const VehicleState& state, const geom::Vec2& target,
                          double lookahead) {
  const double c = std::cos(state.pose.theta);
  const double s = std::sin(state.pose.theta);
  const double dx = target.x() - state.pose.x;
  const double dy = target.y() - state.pose.y;
  // Target bearing in the body frame.
  const double bx = c * dx + s * dy;
  const double by = -s * dx + c * dy;
  const double alpha = std::atan2(by, bx);
  const double steer =
      std::atan(2.0 * state.wheelbase * std::sin(alpha) / lookahead);
  return std::clamp(steer, -state.steer_max, state.steer_max);
}

double pure_pursuit_steer(const VehicleState& state,
                          std::span<const geom::Vec2> path, double lookahead) {
  if (path.size() < 2) {
    throw PathExhausted("path too short for pursuit");
  }
  const geom::Vec2 position{state.pose.x, state.pose.y};
  const double s_ego = geom::frenet_project(path, position).station;
  const double s_target = s_ego + lookahead;
  if (s_target > geom::polyline_length(path)) {
    throw PathExhausted("no path point one lookahead ahead");
  }
  return pure_pursuit_steer(state, geom::point_at_station(path, s_target),
                            lookahead);
}

namespace {

// Projects the four corners of each box onto the candidate axis and checks
// for a gap.
bool separated_on_axis(const geom::Vec2& axis,
                       const std::array<geom::Vec2, 4>& a,
                       const std::array<geom::Vec2, 4>& b) {
  double a_min = std::numeric_limits<double>::infinity(), a_max = -a_min;
  double b_min = a_min, b_max = a_max;
  for (const auto& p : a) {
    const double d = p.dot(axis);
    a_min = std::min(a_min, d);
    a_max = std::max(a_max, d);
  }
  for (const auto& p : b) {
    const double d = p.dot(axis);
    b_min = std::min(b_min, d);
    b_max = std::max(b_max, d);
  }
  return a_max < b_min || b_max < a_min;
}

std::array<geom::Vec2, 4> box_corners(const geom::Pose2& pose,
                                      const geom::Vec2& half) {
  const double c = std::cos(pose.theta);
  const double s = std::sin(pose.theta);
  const geom::Vec2 center{pose.x, pose.y};
  const geom::Vec2 fwd{c * half.x(), s * half.x()};
  const geom::Vec2 left{-s * half.y(), c * half.y()};
  return {center + fwd + left, center + fwd - left, center - fwd - left,
          center - fwd + left};
}

}  // namespace

bool footprints_overlap(const geom::Pose2& pose_a, const geom::Vec2& half_a,
                        const geom::Pose2& pose_b, const geom::Vec2& half_b) {
  const auto ca = box_corners(pose_a, half_a);
  const auto cb = box_corners(pose_b, half_b);
  const std::array<geom::Vec2, 4> axes{
      geom::Vec2{std::cos(pose_a.theta), std::sin(pose_a.theta)},
      geom::Vec2{-std::sin(pose_a.theta), std::cos(pose_a.theta)},
      geom::Vec2{std::cos(pose_b.theta), std::sin(pose_b.theta)},
      geom::Vec2{-std::sin(pose_b.theta), std::cos(pose_b.theta)}};
  for (const auto& axis : axes) {
    if (separated_on_axis(axis, ca, cb)) return false;
  }
  return true;
}

}  // namespace uak::sim
