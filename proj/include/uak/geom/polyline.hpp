#pragma once

#include <span>
#include <vector>

#include "uak/error.hpp"
#include "uak/geom/pose2.hpp"

namespace uak::geom {

UAK_DEFINE_ERROR(DegenerateReference);

// Position along a reference line: station is arc length from the start,
// lateral is the signed normal offset (positive to the left of travel).
struct FrenetCoord {
  double station = 0.0;
  double lateral = 0.0;
};

// Cumulative arc length at each vertex; front() is 0.
std::vector<double> cumulative_lengths(std::span<const Vec2> points);

double polyline_length(std::span<const Vec2> points);

// Interpolated point at a clamped station.
Vec2 point_at_station(std::span<const Vec2> points, double station);

// Unit tangent of the segment containing the station.
Vec2 tangent_at_station(std::span<const Vec2> points, double station);

// Projects a point onto the reference polyline.
// Throws DegenerateReference if the reference is shorter than 1e-9 m.
FrenetCoord frenet_project(std::span<const Vec2> reference, const Vec2& point);

// Reconstructs a map-frame point from Frenet coordinates on the reference.
Vec2 frenet_embed(std::span<const Vec2> reference, const FrenetCoord& coord);

// Distance from a point to the nearest vertex-to-vertex segment.
double distance_to_polyline(std::span<const Vec2> polyline, const Vec2& point);

// Signed curvature of the circle through three points (left turn positive);
// 0 when the points are too close to define one.
double three_point_curvature(const Vec2& p1, const Vec2& p2, const Vec2& p3);

}  // namespace uak::geom
