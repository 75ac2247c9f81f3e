#pragma once

#include <array>
#include <span>
#include <vector>

#include "uak/error.hpp"
#include "uak/geom/pose2.hpp"

namespace uak::geom {

UAK_DEFINE_ERROR(DuplicateKnot);

// One cubic piece per axis: f(u) = a*u^3 + b*u^2 + c*u + d with
// u = s - s_start. Coefficients ordered {a, b, c, d}.
struct SplineSegment {
  std::array<double, 4> coeffs_x{};
  std::array<double, 4> coeffs_y{};
  double s_start = 0.0;
  double s_end = 0.0;
};

// Arc-length-parameterized planar cubic spline with natural boundary
// conditions (zero second derivative at both ends). The parameter is the
// cumulative chord length of the input points, which the planners treat as
// station.
class CubicSpline2d {
 public:
  // Interpolates the points using chord-length stations.
  // Requires at least 3 points; consecutive points closer than 1e-9 m
  // raise DuplicateKnot.
  static CubicSpline2d fit(std::span<const Vec2> points);

  // Interpolates with caller-supplied strictly increasing stations.
  static CubicSpline2d fit(std::span<const Vec2> points,
                           std::span<const double> stations);

  Vec2 position(double s) const;
  Vec2 derivative(double s) const;
  Vec2 second_derivative(double s) const;

  // Signed curvature from first/second parameter derivatives.
  double curvature(double s) const;

  double total_length() const { return segments_.empty() ? 0.0 : segments_.back().s_end; }
  const std::vector<SplineSegment>& segments() const { return segments_; }

 private:
  const SplineSegment& segment_at(double s) const;
  std::vector<SplineSegment> segments_;
};

// Natural cubic spline through (stations, values); solves the tridiagonal
// second-derivative system with the Thomas algorithm and returns per-segment
// {a, b, c, d} coefficients in (s - s_i).
std::vector<std::array<double, 4>> fit_natural_cubic(
    std::span<const double> stations, std::span<const double> values);

}  // namespace uak::geom
