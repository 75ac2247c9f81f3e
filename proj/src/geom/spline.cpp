#include "uak/geom/spline.hpp"

#include <algorithm>
#include <cmath>

namespace uak::geom {

std::vector<std::array<double, 4>> fit_natural_cubic(
    std::span<const double> stations, std::span<const double> values) {
  const std::size_t n = stations.size();
  if (n < 3) throw DuplicateKnot("spline interpolation needs at least 3 points");
  std::vector<double> h(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = stations[i + 1] - stations[i];
    if (h[i] < 1e-9) throw DuplicateKnot("consecutive knots coincide");
  }

  // Tridiagonal system for interior second derivatives, natural ends.
  std::vector<double> diag(n, 2.0), upper(n, 0.0), rhs(n, 0.0), m(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    diag[i] = 2.0 * (h[i - 1] + h[i]);
    upper[i] = h[i];
    rhs[i] = 6.0 * ((values[i + 1] - values[i]) / h[i] -
                    (values[i] - values[i - 1]) / h[i - 1]);
  }
  // Thomas forward sweep over rows 1..n-2 (rows 0 and n-1 are M = 0).
  for (std::size_t i = 2; i + 1 < n; ++i) {
    const double w = h[i - 1] / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  for (std::size_t i = n - 2; i >= 1; --i) {
    m[i] = (rhs[i] - upper[i] * m[i + 1]) / diag[i];
  }

  std::vector<std::array<double, 4>> out(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double a = (m[i + 1] - m[i]) / (6.0 * h[i]);
    const double b = m[i] / 2.0;
    const double c = (values[i + 1] - values[i]) / h[i] -
                     h[i] * (2.0 * m[i] + m[i + 1]) / 6.0;
    out[i] = {a, b, c, values[i]};
  }
  return out;
}

CubicSpline2d CubicSpline2d::fit(std::span<const Vec2> points) {
  std::vector<double> stations(points.size(), 0.0);
  for (std::size_t i = 1; i < points.size(); ++i) {
    stations[i] = stations[i - 1] + (points[i] - points[i - 1]).norm();
  }
  return fit(points, stations);
}

CubicSpline2d CubicSpline2d::fit(std::span<const Vec2> points,
                                 std::span<const double> stations) {
  if (points.size() < 3) throw DuplicateKnot("spline needs at least 3 points");
  std::vector<double> xs(points.size()), ys(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    xs[i] = points[i].x();
    ys[i] = points[i].y();
  }
  const auto cx = fit_natural_cubic(stations, xs);
  const auto cy = fit_natural_cubic(stations, ys);

  CubicSpline2d spline;
  spline.segments_.resize(cx.size());
  for (std::size_t i = 0; i < cx.size(); ++i) {
    spline.segments_[i] = {cx[i], cy[i], stations[i], stations[i + 1]};
  }
  return spline;
}

const SplineSegment& CubicSpline2d::segment_at(double s) const {
  auto it = std::upper_bound(
      segments_.begin(), segments_.end(), s,
      [](double v, const SplineSegment& seg) { return v < seg.s_end; });
  if (it == segments_.end()) return segments_.back();
  return *it;
}

namespace {
double eval(const std::array<double, 4>& c, double u) {
  return ((c[0] * u + c[1]) * u + c[2]) * u + c[3];
}
double eval_d(const std::array<double, 4>& c, double u) {
  return (3.0 * c[0] * u + 2.0 * c[1]) * u + c[2];
}
double eval_dd(const std::array<double, 4>& c, double u) {
  return 6.0 * c[0] * u + 2.0 * c[1];
}
}  // namespace

Vec2 CubicSpline2d::position(double s) const {
  const SplineSegment& seg = segment_at(s);
  const double u = s - seg.s_start;
  return {eval(seg.coeffs_x, u), eval(seg.coeffs_y, u)};
}

Vec2 CubicSpline2d::derivative(double s) const {
  const SplineSegment& seg = segment_at(s);
  const double u = s - seg.s_start;
  return {eval_d(seg.coeffs_x, u), eval_d(seg.coeffs_y, u)};
}

Vec2 CubicSpline2d::second_derivative(double s) const {
  const SplineSegment& seg = segment_at(s);
  const double u = s - seg.s_start;
  return {eval_dd(seg.coeffs_x, u), eval_dd(seg.coeffs_y, u)};
}

double CubicSpline2d::curvature(double s) const {
  const Vec2 d = derivative(s);
  const Vec2 dd = second_derivative(s);
  const double speed2 = d.squaredNorm();
  if (speed2 < 1e-12) return 0.0;
  return (d.x() * dd.y() - d.y() * dd.x()) / (speed2 * std::sqrt(speed2));
}

}  // namespace uak::geom
