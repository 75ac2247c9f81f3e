#include "uak/cloud/road_features.hpp"

#include <cmath>
#include <limits>

namespace uak::cloud {

ReflectivityRaster rasterize_reflectivity(const PointCloud& cloud,
                                          double cell_size) {
  if (cloud.empty()) throw EmptyRaster("cannot rasterize an empty cloud");

  double min_x = std::numeric_limits<double>::infinity();
  double min_y = std::numeric_limits<double>::infinity();
  double max_x = -std::numeric_limits<double>::infinity();
  double max_y = -std::numeric_limits<double>::infinity();
  for (const Point& p : cloud.points) {
    min_x = std::min(min_x, p.x);
    min_y = std::min(min_y, p.y);
    max_x = std::max(max_x, p.x);
    max_y = std::max(max_y, p.y);
  }

  ReflectivityRaster raster;
  raster.cell_size = cell_size;
  raster.cols = static_cast<int>(std::floor((max_x - min_x) / cell_size)) + 1;
  raster.rows = static_cast<int>(std::floor((max_y - min_y) / cell_size)) + 1;
  raster.origin_x = min_x + 0.5 * cell_size;
  raster.origin_y = min_y + 0.5 * cell_size;
  raster.values.assign(static_cast<std::size_t>(raster.rows) * raster.cols, 0.0);

  std::vector<std::uint32_t> counts(raster.values.size(), 0);
  for (const Point& p : cloud.points) {
    int col = static_cast<int>(std::floor((p.x - min_x) / cell_size));
    int row = static_cast<int>(std::floor((p.y - min_y) / cell_size));
    col = std::min(std::max(col, 0), raster.cols - 1);
    row = std::min(std::max(row, 0), raster.rows - 1);
    raster.at(row, col) += p.reflectivity;
    ++counts[static_cast<std::size_t>(row) * raster.cols + col];
  }
  for (std::size_t i = 0; i < raster.values.size(); ++i) {
    if (counts[i] > 0) raster.values[i] /= static_cast<double>(counts[i]);
  }
  return raster;
}

RoadFeatureSet extract_road_features(const ReflectivityRaster& raster,
                                     double threshold) {
  if (raster.rows <= 0 || raster.cols <= 0 || raster.values.empty()) {
    throw EmptyRaster("cannot extract features from an empty raster");
  }
  RoadFeatureSet out;
  // High-pass response at interior cells only; border cells lack a full
  // neighborhood and would alias the raster edge as a feature.
  for (int row = 1; row + 1 < raster.rows; ++row) {
    for (int col = 1; col + 1 < raster.cols; ++col) {
      const double response = 4.0 * raster.at(row, col) -
                              raster.at(row - 1, col) - raster.at(row + 1, col) -
                              raster.at(row, col - 1) - raster.at(row, col + 1);
      if (std::abs(response) >= threshold) {
        RoadFeature f;
        f.x = raster.origin_x + col * raster.cell_size;
        f.y = raster.origin_y + row * raster.cell_size;
        f.strength = std::abs(response);
        out.features.push_back(f);
      }
    }
  }
  return out;
}

}  // namespace uak::cloud
