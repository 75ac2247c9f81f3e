#pragma once

#include <utility>
#include <vector>

#include "uak/cloud/map_store.hpp"
#include "uak/loc/registration.hpp"
#include "uak/road/road_graph.hpp"

namespace uak::loc {

UAK_DEFINE_ERROR(InsufficientHistory);

// Dead-reckoning pose track in the odometry frame.
struct OdometryTrack {
  struct Sample {
    double t = 0.0;
    geom::Pose2 pose;
  };
  std::vector<Sample> samples;

  void push(double t, const geom::Pose2& pose);
};

// Body-frame incremental motion between times t and t + dt, interpolating
// between samples and extrapolating the latest inter-sample motion past the
// end of the track. Throws InsufficientHistory for fewer than 2 samples.
geom::Transform2 predict_from_odometry(const OdometryTrack& track, double t,
                                       double dt);

enum class Mode { Navigation, LaneFollow, Stop };

const char* mode_name(Mode mode);

struct LocalizerState {
  geom::Pose2 pose;               // current estimate in the map frame
  geom::Transform2 last_transform;  // body->map transform of the last step
  Mode mode = Mode::Navigation;
  int consecutive_failures = 0;
  double t = 0.0;      // time of the last step
  bool last_failed = false;

  static LocalizerState initialized(const geom::Pose2& pose, double t);
};

// Registration failure test: the correction is geometrically unreachable
// within max_iterations steps of epsilon_corres each, the fitness exceeds
// the threshold, or the solver did not converge.
bool detect_failure(const RegistrationResult& result,
                    const geom::Pose2& prev_pose, const geom::Pose2& new_pose,
                    const RegistrationConfig& cfg, double fitness_threshold);

struct WindowParams {
  double base = 70.0;   // radius at standstill [m]
  double gain = 1.8;    // extra radius per m/s of speed [s]
  double scan_voxel_size = 1.0;
};

// One fused localization update: voxelize the scan, cut the sliding-window
// map at the speed-dependent radius, register with an odometry-predicted
// initial guess, and fall back to dead reckoning when the result fails the
// health test. Never throws on matching failure; the failure path publishes
// the odometry prediction.
std::pair<LocalizerState, RegistrationResult> localization_step(
    const cloud::PointCloud& scan, const OdometryTrack& odom,
    const LocalizerState& state, const cloud::MapStore& store,
    const RegistrationConfig& cfg, double speed, double t,
    const WindowParams& window = {});

// Healthy iff the pose sits within max_lateral of the nearest link
// centerline of the road graph.
bool health_check(const geom::Pose2& pose, const road::RoadGraph& road_map,
                  double max_lateral);

// Resilience mode machine. Stop is absorbing; leave it via reinitialize().
Mode resilience_transition(const LocalizerState& state, bool healthy,
                           bool scan_ok, bool lane_follow_ok);

// Explicit re-initialization: resets the estimate to a known pose and
// returns the machine to Navigation.
LocalizerState reinitialize(const geom::Pose2& pose, double t);

}  // namespace uak::loc
