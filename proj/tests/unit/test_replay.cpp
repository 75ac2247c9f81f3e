#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "uak/sim/replay.hpp"

using namespace uak;

namespace {

// Short ring course (~250 m) keeps the replay tests fast while still
// exercising every heading.
std::vector<geom::Vec2> ring_course(double radius = 40.0, int segments = 96) {
  std::vector<geom::Vec2> out;
  out.reserve(segments + 1);
  for (int i = 0; i <= segments; ++i) {
    const double a = 2.0 * std::numbers::pi * i / segments;
    out.push_back({radius * std::cos(a), radius * std::sin(a)});
  }
  return out;
}

bool same_pose(const geom::Pose2& a, const geom::Pose2& b) {
  return a.x == b.x && a.y == b.y && a.theta == b.theta;
}

}  // namespace

TEST_CASE("survey synthesis is deterministic and hugs the course") {
  const auto course = ring_course();
  const auto a = sim::synthesize_course_cloud(course, 42);
  const auto b = sim::synthesize_course_cloud(course, 42);
  REQUIRE(a.size() == b.size());
  CHECK(a.size() > 10000);
  bool identical = true;
  for (std::size_t i = 0; i < a.size(); ++i) {
    identical = identical && a.points[i].x == b.points[i].x &&
                a.points[i].y == b.points[i].y && a.points[i].z == b.points[i].z;
  }
  CHECK(identical);
  CHECK_NOTHROW(a.validate());

  const auto c = sim::synthesize_course_cloud(course, 43);
  REQUIRE(c.size() == a.size());
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    differs = differs || a.points[i].x != c.points[i].x;
  }
  CHECK(differs);

  // Every point lies within the wall offset (plus jitter) of the centerline.
  sim::SurveyParams params;
  double max_lateral = 0.0;
  for (const auto& p : a.points) {
    max_lateral = std::max(
        max_lateral, geom::distance_to_polyline(course, {p.x, p.y}));
  }
  CHECK(max_lateral <= params.wall_offset + 0.1);

  const std::vector<geom::Vec2> degenerate{{0.0, 0.0}};
  CHECK_THROWS_AS(sim::synthesize_course_cloud(degenerate, 1),
                  sim::ReplayError);
}

TEST_CASE("truth poses advance at constant speed along the tangent") {
  const std::vector<geom::Vec2> line{{0.0, 0.0}, {100.0, 0.0}};
  const auto poses = sim::course_truth_poses(line, 5.0, 0.1);
  REQUIRE(poses.size() == 201);  // stations 0, 0.5, ..., 100
  CHECK(poses.front().x == doctest::Approx(0.0));
  CHECK(poses.back().x == doctest::Approx(100.0));
  for (std::size_t i = 1; i < poses.size(); ++i) {
    CHECK(geom::planar_distance(poses[i - 1], poses[i]) ==
          doctest::Approx(0.5).epsilon(1e-12));
    CHECK(poses[i].theta == doctest::Approx(0.0));
  }

  const auto ring = ring_course();
  const auto ring_poses = sim::course_truth_poses(ring, 8.0, 0.1);
  // Heading follows the local tangent: quarter way around a CCW ring the
  // tangent points in -x.
  const std::size_t quarter = ring_poses.size() / 4;
  CHECK(std::cos(ring_poses[quarter].theta) ==
        doctest::Approx(-1.0).epsilon(0.05));

  CHECK_THROWS_AS(sim::course_truth_poses(line, 0.0, 0.1), sim::ReplayError);
  CHECK_THROWS_AS(sim::course_truth_poses(line, 5.0, -1.0), sim::ReplayError);
}

TEST_CASE("zero-noise replay tracks truth near the voxel floor") {
  const auto course = ring_course();
  const auto survey = sim::synthesize_course_cloud(course, 9);
  const auto truth = sim::course_truth_poses(course, 8.0, 0.1);

  sim::ReplayParams params;
  params.seed = 3;
  params.noise = {0.0, 0.0, 0.0};
  const auto log = sim::run_localization_replay(survey, truth, params);
  CHECK(log.summary.steps == static_cast<int>(truth.size()) - 1);
  CHECK(log.summary.failures == 0);
  CHECK(log.summary.fused_rms < 0.02);
  CHECK(log.summary.fused_max < 0.06);
  // Perfect odometry never drifts.
  CHECK(log.summary.odom_rms == doctest::Approx(0.0).epsilon(1e-12));
  for (const auto& step : log.steps) {
    CHECK(step.mode == loc::Mode::Navigation);
  }
}

TEST_CASE("fused estimate beats dead reckoning under odometry noise") {
  const auto course = ring_course();
  const auto survey = sim::synthesize_course_cloud(course, 9);
  const auto truth = sim::course_truth_poses(course, 8.0, 0.1);

  sim::ReplayParams params;
  params.seed = 11;
  params.noise = {0.02, 0.002, 0.02};
  const auto log = sim::run_localization_replay(survey, truth, params);
  CHECK(log.summary.failures == 0);
  CHECK(log.summary.fused_rms < 0.05);
  CHECK(log.summary.odom_rms > 3.0 * log.summary.fused_rms);
  CHECK(log.summary.odom_max > log.summary.fused_max);
}

TEST_CASE("forced scan dropouts fall back to odometry and recover") {
  const auto course = ring_course();
  const auto survey = sim::synthesize_course_cloud(course, 9);
  const auto truth = sim::course_truth_poses(course, 8.0, 0.1);

  sim::ReplayParams params;
  params.seed = 11;
  params.force_fail_fraction = 0.1;
  const auto log = sim::run_localization_replay(survey, truth, params);
  // Bernoulli outage draws: roughly a tenth of the steps, never exact.
  CHECK(log.summary.forced_failures > log.summary.steps / 25);
  CHECK(log.summary.forced_failures < log.summary.steps / 4);

  for (std::size_t i = 0; i < log.steps.size(); ++i) {
    const auto& step = log.steps[i];
    if (!step.forced) continue;
    // A dropped scan must fail and demote the mode machine out of full
    // navigation for that step.
    CHECK(step.failed);
    CHECK(step.mode == loc::Mode::LaneFollow);
    // The published pose is exactly the odometry-chained prediction from
    // the previous estimate (dead-reckoning fallback, not a guess).
    if (i > 0 && !log.steps[i - 1].failed) {
      const geom::Transform2 inc = geom::compose(
          geom::inverse(geom::to_transform(log.steps[i - 1].odom_only)),
          geom::to_transform(step.odom_only));
      const geom::Pose2 expected =
          geom::advance(log.steps[i - 1].fused, inc);
      CHECK(geom::planar_distance(expected, step.fused) < 1e-12);
    }
    // Registration recovers within three steps of the outage run ending.
    std::size_t run_end = i;
    while (run_end + 1 < log.steps.size() && log.steps[run_end + 1].forced) {
      ++run_end;
    }
    bool recovered = false;
    for (std::size_t j = run_end + 1;
         j < std::min(run_end + 4, log.steps.size()); ++j) {
      if (!log.steps[j].failed && log.steps[j].mode == loc::Mode::Navigation) {
        recovered = true;
        break;
      }
    }
    if (run_end + 1 < log.steps.size()) CHECK(recovered);
  }
  // Outages leave the absolute error bounded by the per-step drift.
  CHECK(log.summary.fused_max < 0.1);
}

TEST_CASE("replay is bit-identical across runs") {
  const auto course = ring_course();
  const auto survey = sim::synthesize_course_cloud(course, 9);
  const auto truth = sim::course_truth_poses(course, 8.0, 0.1);

  sim::ReplayParams params;
  params.seed = 21;
  params.noise = {0.02, 0.002, 0.02};
  params.force_fail_fraction = 0.05;
  const auto a = sim::run_localization_replay(survey, truth, params);
  const auto b = sim::run_localization_replay(survey, truth, params);
  REQUIRE(a.steps.size() == b.steps.size());
  for (std::size_t i = 0; i < a.steps.size(); ++i) {
    CHECK(same_pose(a.steps[i].fused, b.steps[i].fused));
    CHECK(same_pose(a.steps[i].odom_only, b.steps[i].odom_only));
    CHECK(a.steps[i].failed == b.steps[i].failed);
    CHECK(a.steps[i].fitness == b.steps[i].fitness);
  }
  CHECK(a.summary.fused_rms == b.summary.fused_rms);
  CHECK(a.summary.odom_rms == b.summary.odom_rms);

  sim::ReplayParams other = params;
  other.seed = 22;
  const auto c = sim::run_localization_replay(survey, truth, other);
  CHECK(c.summary.odom_rms != a.summary.odom_rms);

  CHECK_THROWS_AS(
      sim::run_localization_replay(survey, std::vector<geom::Pose2>{}, params),
      sim::ReplayError);
}
