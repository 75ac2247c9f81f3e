#include "uak/sim/noise.hpp"

#include <cmath>
#include <numbers>

namespace uak::sim {

double NoiseModel::gaussian(double sigma) {
  // Box-Muller on two 53-bit uniforms; u1 is shifted into (0, 1] so the log
  // is always finite.
  constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
  const double u1 = 1.0 - static_cast<double>(rng_() >> 11) * kScale;
  const double u2 = static_cast<double>(rng_() >> 11) * kScale;
  const double z =
      std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  return sigma * z;
}

geom::Transform2 NoiseModel::noisy_increment(const geom::Transform2& truth) {
  geom::Transform2 noisy = truth;
  noisy.translation.x() += gaussian(params_.sigma_xy);
  noisy.translation.y() += gaussian(params_.sigma_xy);
  noisy.rotation =
      geom::normalize_angle(noisy.rotation + gaussian(params_.sigma_theta));
  return noisy;
}

cloud::PointCloud NoiseModel::noisy_scan(const cloud::PointCloud& truth) {
  cloud::PointCloud out = truth;
  for (auto& p : out.points) {
    p.x += gaussian(params_.sigma_scan);
    p.y += gaussian(params_.sigma_scan);
  }
  return out;
}

}  // namespace uak::sim
