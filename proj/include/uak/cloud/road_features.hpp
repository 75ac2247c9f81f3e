#pragma once

#include <vector>

#include "uak/cloud/point_cloud.hpp"
#include "uak/geom/pose2.hpp"

namespace uak::cloud {

UAK_DEFINE_ERROR(EmptyRaster);

// Regular 2-D grid of reflectivity values built from ordered points.
struct ReflectivityRaster {
  double origin_x = 0.0;  // center of cell (0, 0)
  double origin_y = 0.0;
  double cell_size = 0.5;
  int rows = 0;
  int cols = 0;
  std::vector<double> values;  // row-major, rows * cols

  double at(int row, int col) const { return values[row * cols + col]; }
  double& at(int row, int col) { return values[row * cols + col]; }
};

// Bins a cloud into a raster of mean reflectivity per cell (0 where empty).
ReflectivityRaster rasterize_reflectivity(const PointCloud& cloud,
                                          double cell_size);

struct RoadFeature {
  double x = 0.0;
  double y = 0.0;
  double strength = 0.0;  // |high-pass response|, >= the extraction threshold
};

struct RoadFeatureSet {
  std::vector<RoadFeature> features;
};

// Convolves the raster with the 3x3 Laplacian sharpening kernel
// [[0,-1,0],[-1,4,-1],[0,-1,0]] over interior cells and keeps responses with
// |response| >= threshold. Throws EmptyRaster.
RoadFeatureSet extract_road_features(const ReflectivityRaster& raster,
                                     double threshold);

}  // namespace uak::cloud
