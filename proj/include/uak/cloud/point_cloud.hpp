#pragma once

#include <vector>

#include "uak/error.hpp"
#include "uak/geom/pose2.hpp"

namespace uak::cloud {

UAK_DEFINE_ERROR(EmptyCloud);
UAK_DEFINE_ERROR(InvalidPoint);

enum class Frame { Body, Map };

struct Point {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double reflectivity = 0.0;  // in [0, 1]
};

struct PointCloud {
  std::vector<Point> points;
  Frame frame = Frame::Map;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }

  // Checks finiteness and the reflectivity range; throws InvalidPoint.
  void validate() const;

  // Re-expresses the cloud under a planar rigid transform (z unchanged).
  PointCloud transformed(const geom::Transform2& t) const;
};

}  // namespace uak::cloud
