#include "uak/sim/replay.hpp"

#include <cmath>
#include <random>

namespace uak::sim {
namespace {

constexpr double kBitsScale = 0x1.0p-53;

// Uniform draw in [-amp, amp] from raw generator bits, so the sequence does
// not depend on the standard library's distribution implementation.
double uniform_jitter(std::mt19937_64& rng, double amp) {
  const double u = static_cast<double>(rng() >> 11) * kBitsScale;
  return amp * (2.0 * u - 1.0);
}

}  // namespace

cloud::PointCloud synthesize_course_cloud(std::span<const geom::Vec2> course,
                                          std::uint64_t seed,
                                          const SurveyParams& params) {
  if (course.size() < 2) {
    throw ReplayError("survey synthesis needs a course with at least 2 points");
  }
  std::mt19937_64 rng(seed);
  cloud::PointCloud out;
  out.frame = cloud::Frame::Map;
  const double length = geom::polyline_length(course);

  // Continuous walls left and right, two height rows each. The jitter keeps
  // voxel covariances from degenerating to exact lines.
  const int wall_samples =
      static_cast<int>(std::floor(length / params.wall_spacing)) + 1;
  out.points.reserve(static_cast<std::size_t>(wall_samples) * 4 + 256);
  for (int i = 0; i < wall_samples; ++i) {
    const double s = i * params.wall_spacing;
    const geom::Vec2 c = geom::point_at_station(course, s);
    const geom::Vec2 dir = geom::tangent_at_station(course, s);
    const geom::Vec2 n{-dir.y(), dir.x()};
    for (const double side : {1.0, -1.0}) {
      for (const double z : {0.5, 1.5}) {
        const double along = uniform_jitter(rng, params.wall_jitter);
        const double up = uniform_jitter(rng, params.wall_jitter);
        out.points.push_back({c.x() + side * params.wall_offset * n.x() +
                                  along * dir.x(),
                              c.y() + side * params.wall_offset * n.y() +
                                  along * dir.y(),
                              z + up, z < 1.0 ? 0.6 : 0.8});
      }
    }
  }

  // Alternating-side pole clusters give distinct along-track anchors.
  int pole_index = 0;
  for (double s = 0.0; s <= length; s += params.pole_spacing, ++pole_index) {
    const geom::Vec2 c = geom::point_at_station(course, s);
    const geom::Vec2 dir = geom::tangent_at_station(course, s);
    const geom::Vec2 n{-dir.y(), dir.x()};
    const double side = (pole_index % 2 == 0) ? 1.0 : -1.0;
    const double px = c.x() + side * params.pole_offset * n.x();
    const double py = c.y() + side * params.pole_offset * n.y();
    for (const double z : {0.3, 0.9, 1.5, 2.1}) {
      for (int j = 0; j < 5; ++j) {
        out.points.push_back({px + uniform_jitter(rng, 0.05),
                              py + uniform_jitter(rng, 0.05),
                              z + uniform_jitter(rng, 0.05), 0.4});
      }
    }
  }
  return out;
}

std::vector<geom::Pose2> course_truth_poses(std::span<const geom::Vec2> course,
                                            double speed, double dt) {
  if (course.size() < 2) {
    throw ReplayError("truth generation needs a course with at least 2 points");
  }
  if (speed <= 0.0 || dt <= 0.0) {
    throw ReplayError("truth generation needs speed > 0 and dt > 0");
  }
  const double length = geom::polyline_length(course);
  const double step = speed * dt;
  std::vector<geom::Pose2> out;
  out.reserve(static_cast<std::size_t>(length / step) + 1);
  for (double s = 0.0; s <= length; s += step) {
    const geom::Vec2 p = geom::point_at_station(course, s);
    const geom::Vec2 dir = geom::tangent_at_station(course, s);
    out.push_back({p.x(), p.y(), std::atan2(dir.y(), dir.x())});
  }
  return out;
}

ReplayLog run_localization_replay(const cloud::PointCloud& survey,
                                  std::span<const geom::Pose2> truth,
                                  const ReplayParams& params) {
  if (truth.size() < 2) {
    throw ReplayError("replay needs at least 2 truth poses");
  }
  const cloud::MapStore store(
      cloud::voxelize(survey, params.map_voxel_size), truth[0]);
  NoiseModel noise(params.seed, params.noise);

  loc::OdometryTrack track;
  geom::Pose2 odom_pose = truth[0];
  track.push(0.0, odom_pose);
  loc::LocalizerState state = loc::LocalizerState::initialized(truth[0], 0.0);

  // Outage steps are drawn from their own stream so toggling the fraction
  // leaves the noise sequence untouched.
  std::mt19937_64 fail_rng(params.seed ^ 0x9E3779B97F4A7C15ULL);
  const double range_sq = params.scan_range * params.scan_range;

  ReplayLog log;
  log.steps.reserve(truth.size() - 1);
  double fused_sq = 0.0;
  double odom_sq = 0.0;

  for (std::size_t k = 1; k < truth.size(); ++k) {
    const double t = static_cast<double>(k) * params.dt;
    const geom::Transform2 true_inc =
        geom::compose(geom::inverse(geom::to_transform(truth[k - 1])),
                      geom::to_transform(truth[k]));
    odom_pose = geom::advance(odom_pose, noise.noisy_increment(true_inc));
    track.push(t, odom_pose);

    const bool forced =
        params.force_fail_fraction > 0.0 &&
        static_cast<double>(fail_rng() >> 11) * kBitsScale <
            params.force_fail_fraction;
    cloud::PointCloud scan;
    scan.frame = cloud::Frame::Body;
    if (!forced) {
      const double c = std::cos(truth[k].theta);
      const double s = std::sin(truth[k].theta);
      for (const cloud::Point& p : survey.points) {
        const double dx = p.x - truth[k].x;
        const double dy = p.y - truth[k].y;
        if (dx * dx + dy * dy > range_sq) continue;
        scan.points.push_back(
            {c * dx + s * dy, -s * dx + c * dy, p.z, p.reflectivity});
      }
      scan = noise.noisy_scan(scan);
    }

    loc::RegistrationResult result;
    std::tie(state, result) =
        loc::localization_step(scan, track, state, store, params.registration,
                               params.speed, t, params.window);
    state.mode = loc::resilience_transition(state, /*healthy=*/true,
                                            /*scan_ok=*/!forced,
                                            /*lane_follow_ok=*/true);

    log.steps.push_back({t, truth[k], state.pose, odom_pose, state.mode,
                         result.fitness, state.last_failed, forced});

    const double fused_err = geom::planar_distance(truth[k], state.pose);
    const double odom_err = geom::planar_distance(truth[k], odom_pose);
    fused_sq += fused_err * fused_err;
    odom_sq += odom_err * odom_err;
    log.summary.fused_max = std::max(log.summary.fused_max, fused_err);
    log.summary.odom_max = std::max(log.summary.odom_max, odom_err);
    if (state.last_failed) ++log.summary.failures;
    if (forced) ++log.summary.forced_failures;
  }

  log.summary.steps = static_cast<int>(log.steps.size());
  log.summary.fused_rms = std::sqrt(fused_sq / log.summary.steps);
  log.summary.odom_rms = std::sqrt(odom_sq / log.summary.steps);
  return log;
}

}  // namespace uak::sim
