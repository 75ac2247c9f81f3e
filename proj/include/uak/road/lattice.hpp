#pragma once

#include "uak/road/route.hpp"

namespace uak::road {

UAK_DEFINE_ERROR(RouteTooShort);
UAK_DEFINE_ERROR(InvalidOffsets);
UAK_DEFINE_ERROR(SingularOffset);

struct LatticeVertex {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
  double kappa = 0.0;       // signed, left turn positive
  double lateral = 0.0;     // signed offset from the centerline [m]
  int lateral_index = 0;    // 0 on the centerline, positive to the left
  Id source_link;
};

// State lattice sampled along a route: one layer per station, one vertex per
// lateral offset, edges only between consecutive layers.
struct ExtendedRoadGraph {
  double station_step = 0.0;
  std::vector<double> stations;
  std::vector<std::vector<LatticeVertex>> layers;  // ascending lateral offset
  // connectivity[k][i] = indices into layers[k+1] reachable from layers[k][i]
  std::vector<std::vector<std::vector<int>>> connectivity;

  std::size_t layer_count() const { return layers.size(); }
};

// Discretizes [x(s), y(s), theta(s), kappa(s)] along the route and places
// one vertex per lateral offset along the local left normal. Offsets must
// include 0 and be symmetric about it. Connectivity joins vertices of
// adjacent layers whose lateral indices differ by at most 1.
ExtendedRoadGraph build_extended_graph(const RoadGraph& graph,
                                       const Route& route, double station_step,
                                       std::vector<double> lateral_offsets);

// Centerline curvature by three-point finite differences, mapped to offset
// vertices as kappa / (1 - kappa * lateral). Throws SingularOffset when the
// offset reaches the center of curvature. Layout mirrors lattice.layers.
std::vector<std::vector<double>> curvature_profile(
    const ExtendedRoadGraph& lattice);

}  // namespace uak::road
