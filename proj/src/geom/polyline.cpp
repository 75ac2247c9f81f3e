#include "uak/geom/polyline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace uak::geom {

std::vector<double> cumulative_lengths(std::span<const Vec2> points) {
  std::vector<double> s(points.size(), 0.0);
  for (std::size_t i = 1; i < points.size(); ++i) {
    s[i] = s[i - 1] + (points[i] - points[i - 1]).norm();
  }
  return s;
}

double polyline_length(std::span<const Vec2> points) {
  double total = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    total += (points[i] - points[i - 1]).norm();
  }
  return total;
}

Vec2 point_at_station(std::span<const Vec2> points, double station) {
  if (points.empty()) throw DegenerateReference("empty polyline");
  if (points.size() == 1) return points[0];
  double remaining = std::max(0.0, station);
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double seg = (points[i] - points[i - 1]).norm();
    if (remaining <= seg || i + 1 == points.size()) {
      if (seg < 1e-12) return points[i];
      const double t = std::min(1.0, remaining / seg);
      return points[i - 1] + t * (points[i] - points[i - 1]);
    }
    remaining -= seg;
  }
  return points.back();
}

Vec2 tangent_at_station(std::span<const Vec2> points, double station) {
  if (points.size() < 2) throw DegenerateReference("polyline needs 2 points");
  double remaining = std::max(0.0, station);
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double seg = (points[i] - points[i - 1]).norm();
    if ((remaining <= seg && seg >= 1e-12) || i + 1 == points.size()) {
      Vec2 d = points[i] - points[i - 1];
      const double n = d.norm();
      if (n < 1e-12) throw DegenerateReference("zero-length segment");
      return d / n;
    }
    remaining -= seg;
  }
  Vec2 d = points.back() - points[points.size() - 2];
  return d / d.norm();
}

namespace {

struct Projection {
  double station = 0.0;
  double lateral = 0.0;
  double distance = std::numeric_limits<double>::infinity();
};

Projection project_impl(std::span<const Vec2> reference, const Vec2& point) {
  Projection best;
  double s0 = 0.0;
  for (std::size_t i = 1; i < reference.size(); ++i) {
    const Vec2 a = reference[i - 1];
    const Vec2 b = reference[i];
    const Vec2 d = b - a;
    const double len = d.norm();
    if (len < 1e-12) continue;
    const double t = std::clamp((point - a).dot(d) / (len * len), 0.0, 1.0);
    const Vec2 foot = a + t * d;
    const double dist = (point - foot).norm();
    if (dist < best.distance) {
      const double cross = d.x() * (point.y() - foot.y()) - d.y() * (point.x() - foot.x());
      best.distance = dist;
      best.station = s0 + t * len;
      best.lateral = dist > 0.0 ? (cross >= 0.0 ? dist : -dist) : 0.0;
    }
    s0 += len;
  }
  return best;
}

}  // namespace

FrenetCoord frenet_project(std::span<const Vec2> reference, const Vec2& point) {
  if (reference.size() < 2 || polyline_length(reference) < 1e-9) {
    throw DegenerateReference("reference shorter than 1e-9 m");
  }
  const Projection p = project_impl(reference, point);
  return {p.station, p.lateral};
}

Vec2 frenet_embed(std::span<const Vec2> reference, const FrenetCoord& coord) {
  const Vec2 base = point_at_station(reference, coord.station);
  const Vec2 tan = tangent_at_station(reference, coord.station);
  const Vec2 normal{-tan.y(), tan.x()};  // left of travel
  return base + coord.lateral * normal;
}

double distance_to_polyline(std::span<const Vec2> polyline, const Vec2& point) {
  if (polyline.empty()) return std::numeric_limits<double>::infinity();
  if (polyline.size() == 1) return (point - polyline[0]).norm();
  return project_impl(polyline, point).distance;
}

double three_point_curvature(const Vec2& p1, const Vec2& p2, const Vec2& p3) {
  const Vec2 d12 = p2 - p1;
  const Vec2 d23 = p3 - p2;
  const Vec2 d13 = p3 - p1;
  const double a = d12.norm();
  const double b = d23.norm();
  const double c = d13.norm();
  if (a < 1e-12 || b < 1e-12 || c < 1e-12) return 0.0;
  const double cross = d12.x() * d23.y() - d12.y() * d23.x();
  return 2.0 * cross / (a * b * c);
}

}  // namespace uak::geom
