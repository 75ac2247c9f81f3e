#include "uak/behavior/gvp.hpp"

#include <algorithm>

namespace uak::behavior {

double acc_speed(double gap, double lead_speed, double ego_speed,
                 const GvpConfig& cfg) {
  const AccParams& acc = cfg.acc;
  const double error = gap - acc.standstill_gap - acc.time_headway * ego_speed;
  double v = lead_speed + acc.k_gap * error;
  v = std::clamp(v, 0.0, acc.v_limit);
  v = std::clamp(v, ego_speed - acc.max_decel * acc.dt,
                 ego_speed + acc.max_accel * acc.dt);
  return std::max(0.0, v);
}

double gvp_velocity(double v_target, double v_ego, double d_target_t,
                    double d_ego_t, double d_target_e, double d_ego_e,
                    double tau) {
  const double sum_t = d_target_t + d_ego_t;
  const double sum_e = d_target_e + d_ego_e;
  if (sum_t <= 0.0 || sum_e <= 0.0) {
    throw DegenerateGeometry("distance pair sums to zero");
  }
  const double v_micro =
      (1.0 - d_target_t / sum_t) * v_target + (1.0 - d_ego_t / sum_t) * v_ego;
  const double v_cog =
      (1.0 - d_target_e / sum_e) * v_target + (1.0 - d_ego_e / sum_e) * v_ego;
  return tau * v_micro + (1.0 - tau) * v_cog;
}

}  // namespace uak::behavior
