#pragma once

#include "uak/error.hpp"

namespace uak::behavior {

UAK_DEFINE_ERROR(DegenerateGeometry);

// Constant-time-gap adaptive cruise parameters.
struct AccParams {
  double time_headway = 1.5;    // [s]
  double standstill_gap = 2.0;  // [m]
  double max_accel = 2.0;       // [m/s^2]
  double max_decel = 3.0;       // [m/s^2]
  double k_gap = 0.5;           // gap-error feedback gain [1/s]
  double v_limit = 13.9;        // speed ceiling [m/s]
  double dt = 0.1;              // control period [s]
};

struct GvpConfig {
  double tau = 0.75;  // aggressiveness blend in [0, 1]
  AccParams acc;
};

// Constant-time-gap law v = lead + k_gap * (gap - standstill - headway*ego),
// clamped to [0, v_limit] and then rate-limited around the current speed.
double acc_speed(double gap, double lead_speed, double ego_speed,
                 const GvpConfig& cfg);

// Geometry-aware velocity blend. Both components weight the target-vehicle
// and ego speeds by the opposing lateral distances (so the weights sum to
// one); tau mixes the terminal-point blend with the center-of-gravity blend.
// Throws DegenerateGeometry when either distance pair sums to <= 0.
double gvp_velocity(double v_target, double v_ego, double d_target_t,
                    double d_ego_t, double d_target_e, double d_ego_e,
                    double tau);

}  // namespace uak::behavior
