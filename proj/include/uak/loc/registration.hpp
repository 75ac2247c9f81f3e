#pragma once

#include "uak/cloud/voxel_grid.hpp"
#include "uak/geom/pose2.hpp"

namespace uak::loc {

UAK_DEFINE_ERROR(NoCorrespondences);

struct RegistrationConfig {
  int max_iterations = 64;                 // n_max
  double epsilon_corres = 0.03;            // convergence step threshold [m]
  double max_corresponding_distance = 3.0;  // correspondence gate [m]
  double matching_error_threshold = 0.5;   // fitness bound (unitless)
  int worker_count = 6;
};

struct RegistrationResult {
  geom::Transform2 transform;  // source frame -> target frame
  double fitness = 0.0;        // mean Mahalanobis residual per correspondence
  int iterations_used = 0;
  bool converged = false;
};

// Aligns two voxel-Gaussian grids by Gauss-Newton over SE(2), minimizing the
// summed Mahalanobis distance between matched cell means under the combined
// cell covariances. Correspondences come from a 3x3x3 voxel-index
// neighborhood search gated at max_corresponding_distance. Residual
// accumulation may run on cfg.worker_count workers; the reduction order is
// fixed, so results are bit-identical for any worker count.
// Throws NoCorrespondences when no source cell can be matched.
RegistrationResult register_grids(const cloud::VoxelGaussianGrid& source,
                                  const cloud::VoxelGaussianGrid& target,
                                  const geom::Transform2& initial_guess,
                                  const RegistrationConfig& cfg);

}  // namespace uak::loc
