#include "uak/plan/primitive.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "uak/geom/polyline.hpp"

namespace uak::plan {

namespace {

constexpr int kSamplesPerPrimitive = 41;  // 40 uniform steps

double eval_poly(const std::array<double, 6>& c, double tau) {
  double acc = 0.0;
  for (int i = 5; i >= 0; --i) acc = acc * tau + c[i];
  return acc;
}

double eval_poly_d1(const std::array<double, 6>& c, double tau) {
  double acc = 0.0;
  for (int i = 5; i >= 1; --i) acc = acc * tau + i * c[i];
  return acc;
}

double eval_poly_d2(const std::array<double, 6>& c, double tau) {
  double acc = 0.0;
  for (int i = 5; i >= 2; --i) acc = acc * tau + i * (i - 1) * c[i];
  return acc;
}

std::array<double, 6> solve_quintic(double p0, double v0, double a0,
                                    double p1, double v1, double a1,
                                    double T) {
  Eigen::Matrix<double, 6, 6> M;
  const double T2 = T * T, T3 = T2 * T, T4 = T3 * T, T5 = T4 * T;
  M << 1, 0, 0, 0, 0, 0,            //
      0, 1, 0, 0, 0, 0,             //
      0, 0, 2, 0, 0, 0,             //
      1, T, T2, T3, T4, T5,         //
      0, 1, 2 * T, 3 * T2, 4 * T3, 5 * T4,  //
      0, 0, 2, 6 * T, 12 * T2, 20 * T3;
  Eigen::Matrix<double, 6, 1> rhs;
  rhs << p0, v0, a0, p1, v1, a1;
  const Eigen::Matrix<double, 6, 1> c = M.partialPivLu().solve(rhs);
  std::array<double, 6> out{};
  for (int i = 0; i < 6; ++i) out[i] = c[i];
  return out;
}

}  // namespace

geom::Vec2 MotionPrimitive::position(double t) const {
  const double tau = t - t_start;
  return {eval_poly(coeffs_x, tau), eval_poly(coeffs_y, tau)};
}

geom::Vec2 MotionPrimitive::velocity(double t) const {
  const double tau = t - t_start;
  return {eval_poly_d1(coeffs_x, tau), eval_poly_d1(coeffs_y, tau)};
}

geom::Vec2 MotionPrimitive::acceleration(double t) const {
  const double tau = t - t_start;
  return {eval_poly_d2(coeffs_x, tau), eval_poly_d2(coeffs_y, tau)};
}

MotionPrimitive generate_primitive(const BoundaryState& start,
                                   const BoundaryState& end, double t_s,
                                   double t_f) {
  const double T = t_f - t_s;
  if (T < 1e-6) {
    throw SingularSystem("primitive horizon too short: " + std::to_string(T));
  }
  MotionPrimitive prim;
  prim.t_start = t_s;
  prim.t_end = t_f;
  prim.coeffs_x =
      solve_quintic(start.x, start.dx, start.ddx, end.x, end.dx, end.ddx, T);
  prim.coeffs_y =
      solve_quintic(start.y, start.dy, start.ddy, end.y, end.dy, end.ddy, T);
  prim.samples.reserve(kSamplesPerPrimitive);
  const double dt = T / (kSamplesPerPrimitive - 1);
  for (int i = 0; i < kSamplesPerPrimitive; ++i) {
    prim.samples.push_back(prim.position(t_s + i * dt));
  }
  return prim;
}

std::vector<MotionPrimitive> sample_primitive_set(
    const BoundaryState& ego, const MacroPath& macro, double road_width,
    const std::vector<double>& terminal_speeds, int lateral_count,
    double horizon) {
  std::vector<MotionPrimitive> out;
  if (macro.polyline.size() < 2 || terminal_speeds.empty() ||
      lateral_count < 1) {
    return out;
  }
  const double v_now = std::hypot(ego.dx, ego.dy);
  const double s_ego =
      geom::frenet_project(macro.polyline, {ego.x, ego.y}).station;

  out.reserve(static_cast<std::size_t>(lateral_count) *
              terminal_speeds.size());
  for (int li = 0; li < lateral_count; ++li) {
    const double offset =
        lateral_count == 1
            ? 0.0
            : -0.5 * road_width +
                  li * (road_width / (lateral_count - 1));
    for (double v_terminal : terminal_speeds) {
      const double s_f = s_ego + horizon * 0.5 * (v_now + v_terminal);
      const geom::Vec2 base = geom::point_at_station(macro.polyline, s_f);
      const geom::Vec2 tangent =
          geom::tangent_at_station(macro.polyline, s_f);
      const geom::Vec2 normal{-tangent.y(), tangent.x()};
      const geom::Vec2 target = base + offset * normal;

      BoundaryState end;
      end.x = target.x();
      end.dx = v_terminal * tangent.x();
      end.ddx = 0.0;
      end.y = target.y();
      end.dy = v_terminal * tangent.y();
      end.ddy = 0.0;
      out.push_back(generate_primitive(ego, end, 0.0, horizon));
    }
  }
  return out;
}

MotionPrimitive to_curvilinear(const MotionPrimitive& prim,
                               const MacroPath& reference) {
  MotionPrimitive out = prim;
  out.stations.clear();
  out.stations.reserve(prim.samples.size());
  double s = 0.0;
  for (std::size_t i = 0; i < prim.samples.size(); ++i) {
    if (i > 0) s += (prim.samples[i] - prim.samples[i - 1]).norm();
    out.stations.push_back(s);
  }
  if (prim.samples.empty() || s < 1e-6) {
    throw DegeneratePrimitive("total arc length below 1e-6");
  }

  double anchor = 0.0;
  if (reference.polyline.size() >= 2) {
    anchor =
        geom::frenet_project(reference.polyline, prim.samples.front()).station;
  }
  out.station_offset = anchor;

  // The spline needs strictly increasing knots; drop samples that do not
  // advance the station.
  std::vector<geom::Vec2> knots;
  std::vector<double> knot_stations;
  knots.reserve(prim.samples.size());
  knot_stations.reserve(prim.samples.size());
  double last_kept = -1.0;
  for (std::size_t i = 0; i < prim.samples.size(); ++i) {
    if (!knots.empty() && out.stations[i] - last_kept < 1e-9) continue;
    knots.push_back(prim.samples[i]);
    knot_stations.push_back(anchor + out.stations[i]);
    last_kept = out.stations[i];
  }
  if (knots.size() < 3) {
    throw DegeneratePrimitive("fewer than 3 distinct samples");
  }
  out.curvilinear = geom::CubicSpline2d::fit(knots, knot_stations);
  return out;
}

}  // namespace uak::plan
