#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "uak/cloud/point_cloud.hpp"
#include "uak/geom/pose2.hpp"

namespace uak::cloud {

struct VoxelIndex {
  std::int32_t x = 0;
  std::int32_t y = 0;
  std::int32_t z = 0;
  bool operator==(const VoxelIndex&) const = default;
};

struct VoxelIndexHash {
  std::size_t operator()(const VoxelIndex& v) const {
    std::uint64_t h = 1469598103934665603ull;
    for (std::int64_t c : {std::int64_t{v.x}, std::int64_t{v.y}, std::int64_t{v.z}}) {
      h ^= static_cast<std::uint64_t>(c);
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

// Per-voxel Gaussian statistics. Covariances are regularized plane-to-plane
// style: eigenvalues scaled by the largest and clamped to [kCovarianceFloor, 1].
struct VoxelCell {
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  Eigen::Matrix3d covariance = Eigen::Matrix3d::Identity();
  std::uint32_t count = 0;
};

class VoxelGaussianGrid {
 public:
  static constexpr double kCovarianceFloor = 1e-3;

  VoxelGaussianGrid() = default;
  explicit VoxelGaussianGrid(double voxel_size) : voxel_size_(voxel_size) {}

  double voxel_size() const { return voxel_size_; }
  std::size_t cell_count() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }

  const std::unordered_map<VoxelIndex, VoxelCell, VoxelIndexHash>& cells() const {
    return cells_;
  }

  VoxelIndex index_of(const Eigen::Vector3d& p) const;
  const VoxelCell* find(const VoxelIndex& idx) const;
  void insert(const VoxelIndex& idx, const VoxelCell& cell) { cells_[idx] = cell; }

  // Cells sorted by voxel index; the deterministic iteration order used by
  // registration and serialization.
  std::vector<std::pair<VoxelIndex, VoxelCell>> sorted_cells() const;

 private:
  double voxel_size_ = 1.0;
  std::unordered_map<VoxelIndex, VoxelCell, VoxelIndexHash> cells_;
};

// Builds per-voxel Gaussian statistics. Single-point cells fall back to an
// isotropic unit covariance; all covariances satisfy the eigenvalue clamp.
// Throws EmptyCloud.
VoxelGaussianGrid voxelize(const PointCloud& cloud, double voxel_size);

// Regularizes a raw covariance: eigenvalues normalized by the largest and
// clamped to [VoxelGaussianGrid::kCovarianceFloor, 1].
Eigen::Matrix3d regularize_covariance(const Eigen::Matrix3d& raw);

// Re-expresses a grid under a planar rigid transform: means are moved,
// covariances rotated, and cells re-indexed at their new positions.
VoxelGaussianGrid transformed_grid(const VoxelGaussianGrid& grid,
                                   const geom::Transform2& t);

// Speed-dependent sliding-window radius: base + gain * speed.
double window_radius(double speed, double base, double gain);

}  // namespace uak::cloud
