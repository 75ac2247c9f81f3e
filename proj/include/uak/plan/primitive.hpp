#pragma once

#include <array>
#include <optional>

#include "uak/geom/spline.hpp"
#include "uak/plan/macro.hpp"

namespace uak::plan {

UAK_DEFINE_ERROR(SingularSystem);
UAK_DEFINE_ERROR(DegeneratePrimitive);

// Full second-order planar state used as a quintic boundary condition.
struct BoundaryState {
  double x = 0.0, dx = 0.0, ddx = 0.0;
  double y = 0.0, dy = 0.0, ddy = 0.0;
};

// Quintic trajectory segment. Coefficients are expressed in the shifted
// time tau = t - t_start so that evaluation at the boundaries is exact.
struct MotionPrimitive {
  std::array<double, 6> coeffs_x{};  // x(tau) = sum a_i tau^i
  std::array<double, 6> coeffs_y{};
  double t_start = 0.0;
  double t_end = 0.0;

  std::vector<geom::Vec2> samples;  // uniform dt = (t_end - t_start) / 40

  // Filled by to_curvilinear: cumulative chain-sum stations per sample
  // (anchored at the reference path's station of the first sample) and the
  // arc-length-parameterized cubic refit of the sample sequence.
  std::vector<double> stations;
  std::optional<geom::CubicSpline2d> curvilinear;
  double station_offset = 0.0;

  geom::Vec2 position(double t) const;
  geom::Vec2 velocity(double t) const;
  geom::Vec2 acceleration(double t) const;
};

// Solves the two 6x6 quintic boundary-value problems exactly; the returned
// polynomials meet all six boundary conditions per axis. Throws
// SingularSystem when t_f - t_s < 1e-6.
MotionPrimitive generate_primitive(const BoundaryState& start,
                                   const BoundaryState& end, double t_s,
                                   double t_f);

// Builds one primitive per (lateral offset, terminal speed) pair. Terminal
// states sit on the macro path at the station the ego would reach over the
// horizon, offset laterally at uniform spacing spanning
// [-road_width/2, +road_width/2], moving along the local tangent with zero
// terminal acceleration. Empty macro path yields an empty set.
std::vector<MotionPrimitive> sample_primitive_set(
    const BoundaryState& ego, const MacroPath& macro, double road_width,
    const std::vector<double>& terminal_speeds, int lateral_count,
    double horizon);

// Computes cumulative arc length over the samples by the Euclidean chain
// sum, anchors it at the reference path's station of the first sample, and
// refits the samples as an arc-length-parameterized cubic spline. Throws
// DegeneratePrimitive when the total arc length is below 1e-6.
MotionPrimitive to_curvilinear(const MotionPrimitive& prim,
                               const MacroPath& reference);

}  // namespace uak::plan
