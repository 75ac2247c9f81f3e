#include "uak/road/lattice.hpp"

#include <algorithm>
#include <cmath>

#include "uak/geom/polyline.hpp"

namespace uak::road {

ExtendedRoadGraph build_extended_graph(const RoadGraph& graph,
                                       const Route& route, double station_step,
                                       std::vector<double> lateral_offsets) {
  if (station_step <= 0.0) {
    throw InvalidOffsets("station_step must be positive");
  }
  if (lateral_offsets.empty()) {
    throw InvalidOffsets("lateral offsets must be non-empty");
  }
  std::sort(lateral_offsets.begin(), lateral_offsets.end());
  std::size_t zero_pos = lateral_offsets.size();
  for (std::size_t i = 0; i < lateral_offsets.size(); ++i) {
    if (std::abs(lateral_offsets[i]) < 1e-9) zero_pos = i;
    const double mirrored = -lateral_offsets[i];
    const bool has_mirror =
        std::any_of(lateral_offsets.begin(), lateral_offsets.end(),
                    [&](double o) { return std::abs(o - mirrored) < 1e-9; });
    if (!has_mirror) {
      throw InvalidOffsets("lateral offsets must be symmetric about 0");
    }
  }
  if (zero_pos == lateral_offsets.size()) {
    throw InvalidOffsets("lateral offsets must include 0");
  }

  const std::vector<geom::Vec2>& poly = route.polyline;
  const double length = geom::polyline_length(poly);
  if (length < 2.0 * station_step) {
    throw RouteTooShort("route length " + std::to_string(length) +
                        " m is shorter than two station steps");
  }

  // Cumulative link-length boundaries for tagging vertices with their link.
  std::vector<double> boundaries;
  double acc = 0.0;
  for (const Id& link_id : route.link_ids) {
    acc += graph.link(link_id).length;
    boundaries.push_back(acc);
  }

  ExtendedRoadGraph lattice;
  lattice.station_step = station_step;
  const int n_layers = static_cast<int>(std::floor(length / station_step + 1e-9)) + 1;
  for (int k = 0; k < n_layers; ++k) {
    const double s = k * station_step;
    lattice.stations.push_back(s);

    const geom::Vec2 center = geom::point_at_station(poly, s);
    const geom::Vec2 tan = geom::tangent_at_station(poly, s);
    const geom::Vec2 normal{-tan.y(), tan.x()};
    const double theta = std::atan2(tan.y(), tan.x());

    Id source_link;
    if (!route.link_ids.empty()) {
      std::size_t li = 0;
      while (li + 1 < boundaries.size() && s >= boundaries[li]) ++li;
      source_link = route.link_ids[li];
    }

    std::vector<LatticeVertex> layer;
    layer.reserve(lateral_offsets.size());
    for (std::size_t i = 0; i < lateral_offsets.size(); ++i) {
      LatticeVertex v;
      const double offset = lateral_offsets[i];
      const geom::Vec2 pos = center + offset * normal;
      v.x = pos.x();
      v.y = pos.y();
      v.theta = theta;
      v.lateral = offset;
      v.lateral_index = static_cast<int>(i) - static_cast<int>(zero_pos);
      v.source_link = source_link;
      layer.push_back(std::move(v));
    }
    lattice.layers.push_back(std::move(layer));
  }

  lattice.connectivity.resize(lattice.layers.size() - 1);
  for (std::size_t k = 0; k + 1 < lattice.layers.size(); ++k) {
    auto& layer_edges = lattice.connectivity[k];
    layer_edges.resize(lattice.layers[k].size());
    for (std::size_t i = 0; i < lattice.layers[k].size(); ++i) {
      for (std::size_t j = 0; j < lattice.layers[k + 1].size(); ++j) {
        const int di = lattice.layers[k][i].lateral_index -
                       lattice.layers[k + 1][j].lateral_index;
        if (std::abs(di) <= 1) layer_edges[i].push_back(static_cast<int>(j));
      }
    }
  }

  const std::vector<std::vector<double>> kappa = curvature_profile(lattice);
  for (std::size_t k = 0; k < lattice.layers.size(); ++k) {
    for (std::size_t i = 0; i < lattice.layers[k].size(); ++i) {
      lattice.layers[k][i].kappa = kappa[k][i];
    }
  }
  return lattice;
}

std::vector<std::vector<double>> curvature_profile(
    const ExtendedRoadGraph& lattice) {
  const std::size_t n = lattice.layers.size();
  if (n < 3) {
    throw RouteTooShort("curvature profile needs at least 3 layers");
  }

  std::vector<geom::Vec2> center(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& layer = lattice.layers[k];
    const auto it =
        std::find_if(layer.begin(), layer.end(),
                     [](const LatticeVertex& v) { return v.lateral_index == 0; });
    if (it == layer.end()) {
      throw InvalidOffsets("layer without a centerline vertex");
    }
    center[k] = {it->x, it->y};
  }

  std::vector<double> center_kappa(n, 0.0);
  for (std::size_t k = 1; k + 1 < n; ++k) {
    center_kappa[k] =
        geom::three_point_curvature(center[k - 1], center[k], center[k + 1]);
  }
  center_kappa[0] = center_kappa[1];
  center_kappa[n - 1] = center_kappa[n - 2];

  std::vector<std::vector<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    out[k].resize(lattice.layers[k].size());
    for (std::size_t i = 0; i < lattice.layers[k].size(); ++i) {
      const double kappa = center_kappa[k];
      const double lateral = lattice.layers[k][i].lateral;
      const double denom = 1.0 - kappa * lateral;
      if (denom <= 1e-12) {
        throw SingularOffset("offset " + std::to_string(lateral) +
                             " m reaches the center of curvature (kappa " +
                             std::to_string(kappa) + ")");
      }
      out[k][i] = kappa / denom;
    }
  }
  return out;
}

}  // namespace uak::road
