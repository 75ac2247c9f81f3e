#pragma once

#include <filesystem>

#include "uak/cloud/voxel_grid.hpp"
#include "uak/geom/pose2.hpp"

namespace uak::cloud {

UAK_DEFINE_ERROR(MapLoadError);

// Immutable voxelized point-cloud map plus its reference origin.
class MapStore {
 public:
  MapStore() = default;
  MapStore(VoxelGaussianGrid full_map, geom::Pose2 origin)
      : full_map_(std::move(full_map)), origin_(origin) {}

  // Loads a `.vgm` binary voxel map or a `.csv` point list (x,y,z,r per
  // row, voxelized at csv_voxel_size).
  static MapStore load(const std::filesystem::path& path,
                       double csv_voxel_size = 1.0);

  const VoxelGaussianGrid& full_map() const { return full_map_; }
  const geom::Pose2& origin() const { return origin_; }

  void save_vgm(const std::filesystem::path& path) const;

 private:
  VoxelGaussianGrid full_map_;
  geom::Pose2 origin_;
};

// Cells whose mean lies strictly within `radius` of the pose in the plane.
VoxelGaussianGrid sliding_window(const MapStore& store, const geom::Pose2& pose,
                                 double radius);

PointCloud load_point_csv(const std::filesystem::path& path, Frame frame);
void save_point_csv(const PointCloud& cloud, const std::filesystem::path& path);

}  // namespace uak::cloud
