#include "uak/cloud/point_cloud.hpp"

#include <cmath>

namespace uak::cloud {

void PointCloud::validate() const {
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Point& p = points[i];
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z)) {
      throw InvalidPoint("non-finite coordinate at point " + std::to_string(i));
    }
    if (!(p.reflectivity >= 0.0 && p.reflectivity <= 1.0)) {
      throw InvalidPoint("reflectivity out of [0,1] at point " + std::to_string(i));
    }
  }
}

PointCloud PointCloud::transformed(const geom::Transform2& t) const {
  PointCloud out;
  out.frame = frame;
  out.points.reserve(points.size());
  const double c = std::cos(t.rotation);
  const double s = std::sin(t.rotation);
  for (const Point& p : points) {
    out.points.push_back({c * p.x - s * p.y + t.translation.x(),
                          s * p.x + c * p.y + t.translation.y(), p.z,
                          p.reflectivity});
  }
  return out;
}

}  // namespace uak::cloud
