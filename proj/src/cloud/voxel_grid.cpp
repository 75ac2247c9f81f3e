#include "uak/cloud/voxel_grid.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <tuple>

namespace uak::cloud {

VoxelIndex VoxelGaussianGrid::index_of(const Eigen::Vector3d& p) const {
  return {static_cast<std::int32_t>(std::floor(p.x() / voxel_size_)),
          static_cast<std::int32_t>(std::floor(p.y() / voxel_size_)),
          static_cast<std::int32_t>(std::floor(p.z() / voxel_size_))};
}

const VoxelCell* VoxelGaussianGrid::find(const VoxelIndex& idx) const {
  auto it = cells_.find(idx);
  return it == cells_.end() ? nullptr : &it->second;
}

std::vector<std::pair<VoxelIndex, VoxelCell>> VoxelGaussianGrid::sorted_cells() const {
  std::vector<std::pair<VoxelIndex, VoxelCell>> out(cells_.begin(), cells_.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::tie(a.first.x, a.first.y, a.first.z) <
           std::tie(b.first.x, b.first.y, b.first.z);
  });
  return out;
}

Eigen::Matrix3d regularize_covariance(const Eigen::Matrix3d& raw) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(raw);
  const Eigen::Vector3d values = solver.eigenvalues();
  const double largest = values.maxCoeff();
  if (!(largest > 0.0) || !std::isfinite(largest)) {
    return Eigen::Matrix3d::Identity();
  }
  Eigen::Vector3d clamped;
  for (int i = 0; i < 3; ++i) {
    clamped[i] = std::clamp(values[i] / largest,
                            VoxelGaussianGrid::kCovarianceFloor, 1.0);
  }
  const Eigen::Matrix3d& basis = solver.eigenvectors();
  return basis * clamped.asDiagonal() * basis.transpose();
}

VoxelGaussianGrid voxelize(const PointCloud& cloud, double voxel_size) {
  if (cloud.empty()) throw EmptyCloud("voxelize: empty cloud");
  if (!(voxel_size > 0.0)) throw InvalidPoint("voxelize: voxel_size must be > 0");

  struct Accum {
    Eigen::Vector3d sum = Eigen::Vector3d::Zero();
    Eigen::Matrix3d outer = Eigen::Matrix3d::Zero();
    std::uint32_t count = 0;
  };

  VoxelGaussianGrid grid(voxel_size);
  std::unordered_map<VoxelIndex, Accum, VoxelIndexHash> accum;
  accum.reserve(cloud.size() / 4 + 1);
  // Statistics are accumulated relative to the voxel corner so they do not
  // depend on the magnitude of map coordinates.
  for (const Point& p : cloud.points) {
    const Eigen::Vector3d v{p.x, p.y, p.z};
    const VoxelIndex idx = grid.index_of(v);
    const Eigen::Vector3d local =
        v - voxel_size * Eigen::Vector3d(idx.x, idx.y, idx.z);
    Accum& a = accum[idx];
    a.sum += local;
    a.outer += local * local.transpose();
    ++a.count;
  }

  for (const auto& [idx, a] : accum) {
    VoxelCell cell;
    cell.count = a.count;
    const double n = static_cast<double>(a.count);
    const Eigen::Vector3d local_mean = a.sum / n;
    cell.mean = local_mean + voxel_size * Eigen::Vector3d(idx.x, idx.y, idx.z);
    const Eigen::Matrix3d raw =
        a.outer / n - local_mean * local_mean.transpose();
    cell.covariance = regularize_covariance(raw);
    grid.insert(idx, cell);
  }
  return grid;
}

double window_radius(double speed, double base, double gain) {
  return base + gain * speed;
}

VoxelGaussianGrid transformed_grid(const VoxelGaussianGrid& grid,
                                   const geom::Transform2& t) {
  const double c = std::cos(t.rotation);
  const double s = std::sin(t.rotation);
  Eigen::Matrix3d rot = Eigen::Matrix3d::Identity();
  rot(0, 0) = c;
  rot(0, 1) = -s;
  rot(1, 0) = s;
  rot(1, 1) = c;

  VoxelGaussianGrid out(grid.voxel_size());
  for (const auto& [idx, cell] : grid.sorted_cells()) {
    VoxelCell moved = cell;
    const geom::Vec2 xy = t.apply({cell.mean.x(), cell.mean.y()});
    moved.mean = {xy.x(), xy.y(), cell.mean.z()};
    moved.covariance = rot * cell.covariance * rot.transpose();
    out.insert(out.index_of(moved.mean), moved);
  }
  return out;
}

}  // namespace uak::cloud
