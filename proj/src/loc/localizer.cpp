#include "uak/loc/localizer.hpp"

#include <cmath>
#include <limits>

namespace uak::loc {
namespace {

geom::Pose2 interpolate(const OdometryTrack::Sample& a,
                        const OdometryTrack::Sample& b, double t) {
  const double span = b.t - a.t;
  const double u = span > 0.0 ? (t - a.t) / span : 0.0;
  const double dtheta = geom::normalize_angle(b.pose.theta - a.pose.theta);
  return {a.pose.x + u * (b.pose.x - a.pose.x),
          a.pose.y + u * (b.pose.y - a.pose.y),
          a.pose.theta + u * dtheta};
}

geom::Pose2 pose_at(const OdometryTrack& track, double t) {
  const auto& s = track.samples;
  if (t <= s.front().t) return s.front().pose;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    if (t <= s[i + 1].t) return interpolate(s[i], s[i + 1], t);
  }
  // Past the end: extrapolate the latest inter-sample motion.
  return interpolate(s[s.size() - 2], s[s.size() - 1], t);
}

}  // namespace

void OdometryTrack::push(double t, const geom::Pose2& pose) {
  if (!samples.empty() && t <= samples.back().t) {
    throw InsufficientHistory("odometry timestamps must strictly increase");
  }
  samples.push_back({t, pose});
}

geom::Transform2 predict_from_odometry(const OdometryTrack& track, double t,
                                       double dt) {
  if (track.samples.size() < 2) {
    throw InsufficientHistory("odometry prediction needs at least 2 samples");
  }
  const geom::Pose2 from = pose_at(track, t);
  const geom::Pose2 to = pose_at(track, t + dt);
  return geom::compose(geom::inverse(geom::to_transform(from)),
                       geom::to_transform(to));
}

const char* mode_name(Mode mode) {
  switch (mode) {
    case Mode::Navigation: return "navigation";
    case Mode::LaneFollow: return "lane_follow";
    case Mode::Stop: return "stop";
  }
  return "stop";
}

LocalizerState LocalizerState::initialized(const geom::Pose2& pose, double t) {
  LocalizerState state;
  state.pose = pose;
  state.last_transform = geom::to_transform(pose);
  state.mode = Mode::Navigation;
  state.consecutive_failures = 0;
  state.t = t;
  state.last_failed = false;
  return state;
}

bool detect_failure(const RegistrationResult& result,
                    const geom::Pose2& prev_pose, const geom::Pose2& new_pose,
                    const RegistrationConfig& cfg, double fitness_threshold) {
  const double reachable = cfg.max_iterations * cfg.epsilon_corres;
  const double transition = geom::planar_distance(prev_pose, new_pose);
  if (reachable < transition) return true;
  if (result.fitness > fitness_threshold) return true;
  return !result.converged;
}

std::pair<LocalizerState, RegistrationResult> localization_step(
    const cloud::PointCloud& scan, const OdometryTrack& odom,
    const LocalizerState& state, const cloud::MapStore& store,
    const RegistrationConfig& cfg, double speed, double t,
    const WindowParams& window) {
  geom::Transform2 increment;  // identity when odometry is unavailable
  try {
    increment = predict_from_odometry(odom, state.t, t - state.t);
  } catch (const InsufficientHistory&) {
  }
  const geom::Transform2 guess = geom::compose(state.last_transform, increment);

  RegistrationResult result;
  bool failed = false;
  try {
    const cloud::VoxelGaussianGrid source =
        cloud::voxelize(scan, window.scan_voxel_size);
    const double radius =
        cloud::window_radius(speed, window.base, window.gain);
    const cloud::VoxelGaussianGrid target =
        cloud::sliding_window(store, state.pose, radius);
    result = register_grids(source, target, guess, cfg);
    failed = detect_failure(result, state.pose,
                            geom::to_pose(result.transform), cfg,
                            cfg.matching_error_threshold);
  } catch (const Error&) {
    // Empty scans and correspondence dropouts take the failure path.
    result.transform = guess;
    result.fitness = std::numeric_limits<double>::infinity();
    result.converged = false;
    failed = true;
  }

  LocalizerState next = state;
  next.t = t;
  next.last_failed = failed;
  if (failed) {
    next.pose = geom::to_pose(guess);
    next.last_transform = guess;
    next.consecutive_failures = state.consecutive_failures + 1;
  } else {
    next.pose = geom::to_pose(result.transform);
    next.last_transform = result.transform;
    next.consecutive_failures = 0;
  }
  return {next, result};
}

bool health_check(const geom::Pose2& pose, const road::RoadGraph& road_map,
                  double max_lateral) {
  const road::NearestLink nearest = road::nearest_link(road_map, pose);
  return std::abs(nearest.lateral) <= max_lateral;
}

Mode resilience_transition(const LocalizerState& state, bool healthy,
                           bool scan_ok, bool lane_follow_ok) {
  if (state.mode == Mode::Stop) return Mode::Stop;
  const bool nav_ok = scan_ok && healthy;
  if (state.mode == Mode::Navigation) {
    if (nav_ok) return Mode::Navigation;
    return lane_follow_ok ? Mode::LaneFollow : Mode::Stop;
  }
  // LaneFollow leaves only after a clean re-initialized fix.
  if (nav_ok && state.consecutive_failures == 0) return Mode::Navigation;
  return lane_follow_ok ? Mode::LaneFollow : Mode::Stop;
}

LocalizerState reinitialize(const geom::Pose2& pose, double t) {
  return LocalizerState::initialized(pose, t);
}

}  // namespace uak::loc
