#include "uak/cloud/map_store.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>

namespace uak::cloud {
namespace {

constexpr char kVgmMagic[8] = {'U', 'A', 'K', 'V', 'G', 'M', '1', '\0'};

template <typename T>
void write_raw(std::ostream& os, const T& value) {
  os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
void read_raw(std::istream& is, T& value) {
  is.read(reinterpret_cast<char*>(&value), sizeof(T));
}

bool starts_numeric(const std::string& line) {
  for (char c : line) {
    if (c == ' ' || c == '\t') continue;
    return (c >= '0' && c <= '9') || c == '-' || c == '+' || c == '.';
  }
  return false;
}

}  // namespace

MapStore MapStore::load(const std::filesystem::path& path, double csv_voxel_size) {
  if (!std::filesystem::exists(path)) {
    throw MapLoadError("map file not found: " + path.string());
  }
  const std::string ext = path.extension().string();
  if (ext == ".csv") {
    PointCloud cloud = load_point_csv(path, Frame::Map);
    return MapStore(voxelize(cloud, csv_voxel_size), geom::Pose2{});
  }
  if (ext != ".vgm") {
    throw MapLoadError("unsupported map extension '" + ext + "': " + path.string());
  }

  std::ifstream is(path, std::ios::binary);
  if (!is) throw MapLoadError("cannot open map: " + path.string());

  char magic[8] = {};
  is.read(magic, sizeof(magic));
  if (!is || std::string(magic, 8) != std::string(kVgmMagic, 8)) {
    throw MapLoadError("bad voxel-map magic: " + path.string());
  }

  double voxel_size = 0.0;
  geom::Pose2 origin;
  std::uint64_t count = 0;
  read_raw(is, voxel_size);
  read_raw(is, origin.x);
  read_raw(is, origin.y);
  read_raw(is, origin.theta);
  read_raw(is, count);
  if (!is || voxel_size <= 0.0) {
    throw MapLoadError("corrupt voxel-map header: " + path.string());
  }

  VoxelGaussianGrid grid(voxel_size);
  for (std::uint64_t i = 0; i < count; ++i) {
    VoxelIndex idx;
    VoxelCell cell;
    read_raw(is, idx.x);
    read_raw(is, idx.y);
    read_raw(is, idx.z);
    read_raw(is, cell.count);
    for (int r = 0; r < 3; ++r) read_raw(is, cell.mean[r]);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) read_raw(is, cell.covariance(r, c));
    if (!is) throw MapLoadError("truncated voxel-map body: " + path.string());
    grid.insert(idx, cell);
  }
  return MapStore(std::move(grid), origin);
}

void MapStore::save_vgm(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw MapLoadError("cannot write map: " + path.string());
  os.write(kVgmMagic, sizeof(kVgmMagic));
  write_raw(os, full_map_.voxel_size());
  write_raw(os, origin_.x);
  write_raw(os, origin_.y);
  write_raw(os, origin_.theta);
  write_raw(os, static_cast<std::uint64_t>(full_map_.cell_count()));
  for (const auto& [idx, cell] : full_map_.sorted_cells()) {
    write_raw(os, idx.x);
    write_raw(os, idx.y);
    write_raw(os, idx.z);
    write_raw(os, cell.count);
    for (int r = 0; r < 3; ++r) write_raw(os, cell.mean[r]);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) write_raw(os, cell.covariance(r, c));
  }
  if (!os) throw MapLoadError("write failed: " + path.string());
}

VoxelGaussianGrid sliding_window(const MapStore& store, const geom::Pose2& pose,
                                 double radius) {
  VoxelGaussianGrid out(store.full_map().voxel_size());
  for (const auto& [idx, cell] : store.full_map().cells()) {
    const double dx = cell.mean.x() - pose.x;
    const double dy = cell.mean.y() - pose.y;
    if (std::sqrt(dx * dx + dy * dy) < radius) out.insert(idx, cell);
  }
  return out;
}

PointCloud load_point_csv(const std::filesystem::path& path, Frame frame) {
  std::ifstream is(path);
  if (!is) throw MapLoadError("cannot open point csv: " + path.string());
  PointCloud cloud;
  cloud.frame = frame;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || !starts_numeric(line)) continue;
    Point p;
    const int got = std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &p.x, &p.y,
                                &p.z, &p.reflectivity);
    if (got < 3) throw MapLoadError("malformed point row '" + line + "'");
    cloud.points.push_back(p);
  }
  if (cloud.empty()) throw MapLoadError("no points in " + path.string());
  cloud.validate();
  return cloud;
}

void save_point_csv(const PointCloud& cloud, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw MapLoadError("cannot write point csv: " + path.string());
  os << "x,y,z,reflectivity\n";
  char buf[160];
  for (const Point& p : cloud.points) {
    std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.6f,%.6f\n", p.x, p.y, p.z,
                  p.reflectivity);
    os << buf;
  }
}

}  // namespace uak::cloud
