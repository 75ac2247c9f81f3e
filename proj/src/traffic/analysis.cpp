#include "uak/traffic/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace uak::traffic {
namespace {

constexpr double kDistanceFloor = 1e-9;

std::vector<geom::Vec2> as_points(const TrajectorySet& set) {
  std::vector<geom::Vec2> out;
  out.reserve(set.points.size());
  for (const auto& p : set.points) out.push_back({p.x, p.y});
  return out;
}

// k-th smallest distance with at most one exact-duplicate removal, used by
// the divergence estimator on both the P and Q side. Unlike the public
// knn_distance, the duplicate skip only engages when the set stays large
// enough afterwards, so the m >= k precondition holds as stated.
double knn_skip_duplicate(std::span<const geom::Vec2> points,
                          const geom::Vec2& query, int k) {
  std::vector<double> sq;
  sq.reserve(points.size());
  for (const auto& p : points) sq.push_back((p - query).squaredNorm());
  const auto zero = std::find(sq.begin(), sq.end(), 0.0);
  if (zero != sq.end() && static_cast<int>(sq.size()) > k) sq.erase(zero);
  std::nth_element(sq.begin(), sq.begin() + (k - 1), sq.end());
  return std::sqrt(sq[k - 1]);
}

double nn_distance(const std::vector<geom::Vec2>& points,
                   const geom::Vec2& query) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : points) best = std::min(best, (p - query).squaredNorm());
  return std::sqrt(best);
}

bool on_segment(const geom::Vec2& a, const geom::Vec2& b,
                const geom::Vec2& p) {
  const geom::Vec2 ab = b - a;
  const geom::Vec2 ap = p - a;
  const double cross = ab.x() * ap.y() - ab.y() * ap.x();
  if (std::abs(cross) > 1e-12) return false;
  const double dot = ap.dot(ab);
  return dot >= 0.0 && dot <= ab.squaredNorm();
}

}  // namespace

void TrajectorySet::validate() const {
  for (const auto& p : points) {
    if (!std::isfinite(p.t) || !std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw InsufficientData("trajectory '" + team +
                             "' contains non-finite coordinates");
    }
  }
}

const char* section_kind_name(SectionKind kind) {
  switch (kind) {
    case SectionKind::Curve: return "curve";
    case SectionKind::Intersection: return "intersection";
    case SectionKind::Straight: return "straight";
  }
  return "straight";
}

void SectionSpec::validate() const {
  if (polygon.size() < 3) {
    throw InsufficientData("section '" + name +
                           "' needs a polygon with at least 3 vertices");
  }
  for (const auto& v : polygon) {
    if (!std::isfinite(v.x()) || !std::isfinite(v.y())) {
      throw InsufficientData("section '" + name +
                             "' has non-finite polygon vertices");
    }
  }
}

double knn_distance(std::span<const geom::Vec2> points,
                    const geom::Vec2& query, int k, bool exclude_self) {
  if (k < 1) throw InsufficientData("knn_distance needs k >= 1");
  const std::size_t needed = static_cast<std::size_t>(k) + (exclude_self ? 1 : 0);
  if (points.size() < needed) {
    throw InsufficientData("knn_distance needs at least " +
                           std::to_string(needed) + " points, got " +
                           std::to_string(points.size()));
  }
  std::vector<double> sq;
  sq.reserve(points.size());
  for (const auto& p : points) sq.push_back((p - query).squaredNorm());
  if (exclude_self) {
    const auto zero = std::find(sq.begin(), sq.end(), 0.0);
    if (zero != sq.end()) sq.erase(zero);
  }
  std::nth_element(sq.begin(), sq.begin() + (k - 1), sq.end());
  return std::sqrt(sq[k - 1]);
}

double kld_spatial(const TrajectorySet& P, const TrajectorySet& Q, int k) {
  if (k < 1) throw InsufficientData("kld_spatial needs k >= 1");
  const int n = static_cast<int>(P.points.size());
  const int m = static_cast<int>(Q.points.size());
  if (n < k + 1) {
    throw InsufficientData("kld_spatial needs |P| >= k + 1, got " +
                           std::to_string(n));
  }
  if (m < k) {
    throw InsufficientData("kld_spatial needs |Q| >= k, got " +
                           std::to_string(m));
  }
  const auto p_pts = as_points(P);
  const auto q_pts = as_points(Q);

  constexpr double d = 2.0;
  double log_sum = 0.0;
  for (const auto& x : p_pts) {
    const double r = std::max(knn_skip_duplicate(p_pts, x, k), kDistanceFloor);
    const double s = std::max(knn_skip_duplicate(q_pts, x, k), kDistanceFloor);
    log_sum += std::log(s / r);
  }
  return (d / n) * log_sum + std::log(static_cast<double>(m) / (n - 1));
}

double mean_nn_error(const TrajectorySet& X, const TrajectorySet& Y) {
  if (X.points.empty() || Y.points.empty()) {
    throw InsufficientData("mean_nn_error needs non-empty sets");
  }
  const auto y_pts = as_points(Y);
  double sum = 0.0;
  for (const auto& p : X.points) sum += nn_distance(y_pts, {p.x, p.y});
  return sum / static_cast<double>(X.points.size());
}

double rms_nn_error(const TrajectorySet& X, const TrajectorySet& Y) {
  if (X.points.empty() || Y.points.empty()) {
    throw InsufficientData("rms_nn_error needs non-empty sets");
  }
  const auto y_pts = as_points(Y);
  double sum_sq = 0.0;
  for (const auto& p : X.points) {
    const double dist = nn_distance(y_pts, {p.x, p.y});
    sum_sq += dist * dist;
  }
  return std::sqrt(sum_sq / static_cast<double>(X.points.size()));
}

bool point_in_polygon(std::span<const geom::Vec2> polygon,
                      const geom::Vec2& point) {
  const std::size_t n = polygon.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    if (on_segment(polygon[j], polygon[i], point)) return true;
  }
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const bool straddles =
        (polygon[i].y() > point.y()) != (polygon[j].y() > point.y());
    if (!straddles) continue;
    const double x_cross =
        polygon[j].x() + (point.y() - polygon[j].y()) /
                             (polygon[i].y() - polygon[j].y()) *
                             (polygon[i].x() - polygon[j].x());
    if (point.x() < x_cross) inside = !inside;
  }
  return inside;
}

std::map<std::string, TrajectorySet> sectionize(
    const TrajectorySet& traj, std::span<const SectionSpec> sections) {
  for (const auto& section : sections) section.validate();
  std::map<std::string, TrajectorySet> out;
  for (const auto& section : sections) {
    out[section.name] = TrajectorySet{traj.team, {}};
  }
  out[kResidualSection] = TrajectorySet{traj.team, {}};
  for (const auto& p : traj.points) {
    const SectionSpec* hit = nullptr;
    for (const auto& section : sections) {
      if (point_in_polygon(section.polygon, {p.x, p.y})) {
        hit = &section;
        break;
      }
    }
    out[hit != nullptr ? hit->name : kResidualSection].points.push_back(p);
  }
  return out;
}

SimilarityReport pairwise_report(std::span<const TrajectorySet> sets,
                                 std::span<const SectionSpec> sections,
                                 int k, int min_samples) {
  if (sets.size() < 2) {
    throw InsufficientData("pairwise_report needs at least 2 trajectory sets");
  }
  for (const auto& set : sets) set.validate();

  SimilarityReport report;
  for (const auto& set : sets) report.teams.push_back(set.team);

  // Pre-split every team once; the full route reuses the inputs directly.
  std::vector<std::map<std::string, TrajectorySet>> split;
  split.reserve(sets.size());
  for (const auto& set : sets) split.push_back(sectionize(set, sections));

  std::vector<std::string> labels{kFullRoute};
  for (const auto& section : sections) labels.push_back(section.name);

  for (const auto& label : labels) {
    SectionReport section_report;
    section_report.section = label;
    for (std::size_t a = 0; a < sets.size(); ++a) {
      for (std::size_t b = a + 1; b < sets.size(); ++b) {
        const TrajectorySet& pa =
            label == kFullRoute ? sets[a] : split[a].at(label);
        const TrajectorySet& pb =
            label == kFullRoute ? sets[b] : split[b].at(label);
        PairCell cell;
        cell.a = static_cast<int>(a);
        cell.b = static_cast<int>(b);
        cell.n = static_cast<int>(pa.points.size());
        cell.m = static_cast<int>(pb.points.size());
        if (!pa.points.empty() && !pb.points.empty()) {
          cell.mean_error = mean_nn_error(pa, pb);
          cell.rms_error = rms_nn_error(pa, pb);
          cell.error_valid = true;
        }
        if (cell.n >= std::max(min_samples, k + 1) &&
            cell.m >= std::max(min_samples, k)) {
          cell.kld = kld_spatial(pa, pb, k);
          cell.kld_valid = true;
        }
        section_report.pairs.push_back(cell);
      }
    }
    report.sections.push_back(std::move(section_report));
  }
  return report;
}

}  // namespace uak::traffic
