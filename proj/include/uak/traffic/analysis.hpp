#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "uak/error.hpp"
#include "uak/geom/pose2.hpp"

namespace uak::traffic {

UAK_DEFINE_ERROR(InsufficientData);

// One team's positioning log: timestamped planar points.
struct TrajectoryPoint {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
};

struct TrajectorySet {
  std::string team;
  std::vector<TrajectoryPoint> points;

  // Throws InsufficientData on non-finite coordinates.
  void validate() const;
};

enum class SectionKind { Curve, Intersection, Straight };

const char* section_kind_name(SectionKind kind);

// Named course region for section-wise breakdowns. The polygon must be
// simple with at least 3 vertices.
struct SectionSpec {
  std::string name;
  SectionKind kind = SectionKind::Straight;
  std::vector<geom::Vec2> polygon;

  void validate() const;
};

// Exact k-th smallest Euclidean distance from query to the point set,
// by brute force. exclude_self removes one zero-distance entry (an
// identical point) before ranking, and raises the size requirement from
// k to k + 1. Throws InsufficientData when the set is too small.
double knn_distance(std::span<const geom::Vec2> points,
                    const geom::Vec2& query, int k, bool exclude_self);

// k-NN Kullback-Leibler divergence estimate between the spatial
// distributions of P (n points) and Q (m points), in nats:
//
//   D = (d / n) * sum_{x in P} log(s_k(x) / r_k(x)) + log(m / (n - 1))
//
// with d = 2, r_k the k-NN distance within P excluding x itself, and s_k
// the k-NN distance to Q. The unit-ball volume constant cancels in the
// ratio. Coincident points are skipped once on both sides (a no-op for
// independent continuous samples, and the reason identical logs score
// ~log(m/(n-1)) ~ 0); distances that are still zero after the skip
// (repeated stationary samples) are floored at 1e-9 m so such logs stay
// analyzable. Requires n >= k + 1 and m >= k; throws InsufficientData.
double kld_spatial(const TrajectorySet& P, const TrajectorySet& Q, int k = 1);

// Mean over x in X of the distance to x's nearest neighbor in Y.
// Throws InsufficientData when either set is empty.
double mean_nn_error(const TrajectorySet& X, const TrajectorySet& Y);

// Root-mean-square variant of the same nearest-neighbor distances. Both
// flavors are reported because "RMSE" in the source material is ambiguous
// between them.
double rms_nn_error(const TrajectorySet& X, const TrajectorySet& Y);

// Even-odd (crossing-parity) point-in-polygon test. Points exactly on an
// edge count as inside, which makes shared-edge assignment deterministic.
bool point_in_polygon(std::span<const geom::Vec2> polygon,
                      const geom::Vec2& point);

// Name of the sectionize bucket holding points outside every section.
inline constexpr const char* kResidualSection = "residual";

// Splits a trajectory by section membership. A point in several sections
// goes to the first-listed one; a point in none goes to kResidualSection.
// Every returned set keeps the input's team name.
std::map<std::string, TrajectorySet> sectionize(
    const TrajectorySet& traj, std::span<const SectionSpec> sections);

// One unordered team pair's similarity numbers. Directional quantities
// run from the lower-index team a toward the higher-index team b:
// kld = D(a || b), mean/rms error = nearest-neighbor error of a against b.
struct PairCell {
  int a = 0;
  int b = 0;
  int n = 0;  // a's sample count in this section
  int m = 0;  // b's sample count in this section
  double kld = 0.0;
  bool kld_valid = false;  // false: too few samples, mean error only
  double mean_error = 0.0;
  double rms_error = 0.0;
  bool error_valid = false;  // false: a side was empty
};

struct SectionReport {
  std::string section;  // kFullRoute or a SectionSpec name
  std::vector<PairCell> pairs;  // upper triangular, (a, b) with a < b
};

inline constexpr const char* kFullRoute = "full";

struct SimilarityReport {
  std::vector<std::string> teams;
  std::vector<SectionReport> sections;  // full route first, then as listed
};

// Pairwise similarity matrix over the full route and each section. A
// section cell with fewer than min_samples points on either side keeps
// its mean error but flags the KLD invalid instead of estimating from
// too little data. Requires at least 2 sets; throws InsufficientData.
SimilarityReport pairwise_report(std::span<const TrajectorySet> sets,
                                 std::span<const SectionSpec> sections,
                                 int k = 1, int min_samples = 50);

}  // namespace uak::traffic
