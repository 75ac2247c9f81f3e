#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "uak/cloud/map_store.hpp"
#include "uak/geom/polyline.hpp"
#include "uak/loc/localizer.hpp"
#include "uak/sim/noise.hpp"

namespace uak::sim {

UAK_DEFINE_ERROR(ReplayError);

// Synthetic survey geometry flanking a course centerline: continuous walls,
// a pole row for along-track texture, all sampled densely enough that the
// voxel statistics are stable under per-point noise.
struct SurveyParams {
  double wall_offset = 8.0;    // lateral wall distance from centerline [m]
  double wall_spacing = 0.05;  // along-wall sample spacing [m]
  double wall_jitter = 0.005;  // uniform along/vertical jitter amplitude [m]
  double pole_offset = 5.0;    // lateral pole-row distance [m]
  double pole_spacing = 12.0;  // along-track pole pitch [m]
};

// Deterministic map-frame point cloud for a course: two walls at
// +/- wall_offset with two height rows each, plus alternating-side pole
// clusters. Identical output for identical inputs.
cloud::PointCloud synthesize_course_cloud(std::span<const geom::Vec2> course,
                                          std::uint64_t seed,
                                          const SurveyParams& params = {});

// Ground-truth poses driving the course at constant speed, one per dt,
// heading along the local tangent. Includes the pose at station 0.
std::vector<geom::Pose2> course_truth_poses(std::span<const geom::Vec2> course,
                                            double speed, double dt);

struct ReplayParams {
  std::uint64_t seed = 0;
  NoiseParams noise;
  loc::RegistrationConfig registration;
  loc::WindowParams window;
  double map_voxel_size = 1.0;
  double scan_range = 35.0;        // body-frame scan truncation radius [m]
  double speed = 8.0;              // course traversal speed [m/s]
  double dt = 0.1;
  // Probability that a step's scan is dropped entirely (sensor outage).
  // Outage steps are drawn from a seed-derived stream, so a given seed
  // always drops the same steps.
  double force_fail_fraction = 0.0;
};

struct ReplayStep {
  double t = 0.0;
  geom::Pose2 truth;
  geom::Pose2 fused;      // published estimate (registration or fallback)
  geom::Pose2 odom_only;  // pure dead-reckoning chain, never corrected
  loc::Mode mode = loc::Mode::Navigation;
  double fitness = 0.0;
  bool failed = false;  // this step fell back to the odometry prediction
  bool forced = false;  // the scan was deliberately dropped
};

struct ReplaySummary {
  double fused_rms = 0.0;
  double fused_max = 0.0;
  double odom_rms = 0.0;
  double odom_max = 0.0;
  int steps = 0;
  int failures = 0;
  int forced_failures = 0;
};

struct ReplayLog {
  std::vector<ReplayStep> steps;
  ReplaySummary summary;
};

// Closed-loop localization replay: per step, the true body increment is
// perturbed into an odometry measurement, a range-limited body-frame scan
// is cut from the survey cloud and perturbed, and the fused estimate is
// produced by scan registration against the sliding-window map with the
// odometry prediction as both initial guess and fallback. Planar errors of
// the fused and odometry-only tracks are summarized over all steps.
ReplayLog run_localization_replay(const cloud::PointCloud& survey,
                                  std::span<const geom::Pose2> truth,
                                  const ReplayParams& params);

}  // namespace uak::sim
