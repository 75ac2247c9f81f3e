#pragma once

#include <cstdint>
#include <random>

#include "uak/cloud/point_cloud.hpp"
#include "uak/geom/pose2.hpp"

namespace uak::sim {

struct NoiseParams {
  double sigma_xy = 0.02;     // odometry translation noise per step [m]
  double sigma_theta = 0.002; // odometry rotation noise per step [rad]
  double sigma_scan = 0.02;   // per-point scan noise [m]
};

// Deterministic Gaussian noise source. All draws come from one seeded
// mt19937_64 stream through a hand-rolled Box-Muller transform, so the
// sequence is identical across platforms and runs.
class NoiseModel {
 public:
  explicit NoiseModel(std::uint64_t seed, NoiseParams params = {})
      : rng_(seed), params_(params) {}

  const NoiseParams& params() const { return params_; }

  // One N(0, sigma^2) draw; sigma = 0 consumes the stream but returns 0.
  double gaussian(double sigma);

  // Adds odometry noise to a true body-frame increment.
  geom::Transform2 noisy_increment(const geom::Transform2& truth);

  // Perturbs each point's x/y by N(0, sigma_scan^2).
  cloud::PointCloud noisy_scan(const cloud::PointCloud& truth);

 private:
  std::mt19937_64 rng_;
  NoiseParams params_;
};

}  // namespace uak::sim
