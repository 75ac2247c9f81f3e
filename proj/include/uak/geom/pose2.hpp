#pragma once

#include <Eigen/Core>
#include <cmath>
#include <numbers>

namespace uak::geom {

using Vec2 = Eigen::Vector2d;

// Normalizes an angle into (-pi, pi].
inline double normalize_angle(double angle) {
  double r = std::remainder(angle, 2.0 * std::numbers::pi);
  if (r <= -std::numbers::pi) r += 2.0 * std::numbers::pi;
  return r;
}

// Vehicle pose in the map frame: position in meters, heading in radians.
struct Pose2 {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  Pose2() = default;
  Pose2(double x_, double y_, double theta_)
      : x(x_), y(y_), theta(normalize_angle(theta_)) {}

  Vec2 position() const { return {x, y}; }
};

// Rigid transform on the plane. Acts as p' = R(rotation) * p + translation.
struct Transform2 {
  double rotation = 0.0;
  Vec2 translation{0.0, 0.0};

  Transform2() = default;
  Transform2(double rotation_, const Vec2& translation_)
      : rotation(normalize_angle(rotation_)), translation(translation_) {}

  static Transform2 identity() { return {}; }

  Vec2 apply(const Vec2& p) const {
    const double c = std::cos(rotation);
    const double s = std::sin(rotation);
    return {c * p.x() - s * p.y() + translation.x(),
            s * p.x() + c * p.y() + translation.y()};
  }
};

// Composition: result applies b first, then a.
inline Transform2 compose(const Transform2& a, const Transform2& b) {
  return {normalize_angle(a.rotation + b.rotation), a.apply(b.translation)};
}

inline Transform2 inverse(const Transform2& t) {
  const double c = std::cos(t.rotation);
  const double s = std::sin(t.rotation);
  return {normalize_angle(-t.rotation),
          Vec2{-(c * t.translation.x() + s * t.translation.y()),
               -(-s * t.translation.x() + c * t.translation.y())}};
}

// A pose is the transform that takes body-frame coordinates to the map frame.
inline Transform2 to_transform(const Pose2& p) {
  return {p.theta, {p.x, p.y}};
}

inline Pose2 to_pose(const Transform2& t) {
  return {t.translation.x(), t.translation.y(), t.rotation};
}

// Applies a body-frame increment to a pose.
inline Pose2 advance(const Pose2& pose, const Transform2& body_delta) {
  return to_pose(compose(to_transform(pose), body_delta));
}

inline double planar_distance(const Pose2& a, const Pose2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

}  // namespace uak::geom
