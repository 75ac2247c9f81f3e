#pragma once

#include "uak/plan/obstacle.hpp"
#include "uak/road/lattice.hpp"

namespace uak::plan {

UAK_DEFINE_ERROR(NoFeasiblePath);

struct MacroWeights {
  double k_obstacle = 1.0;
  double k_curvature = 1.0;
  double k_transient = 1.0;
  double k_route = 1.0;
};

struct MacroPath {
  std::vector<road::LatticeVertex> vertices;
  std::vector<geom::Vec2> polyline;
  double cost = 0.0;
};

// Dynamic-programming sweep over the lattice layers minimizing accumulated
// inter-vertex distance plus the per-vertex heuristic cost (obstacle
// barrier, curvature, transient distance to the previous path, distance to
// the route). Vertices with clearance under the hard margin are pruned;
// exact cost ties go to the lower vertex index. Throws NoFeasiblePath when
// pruning disconnects every layer-to-layer path.
MacroPath plan_macro(const road::ExtendedRoadGraph& lattice,
                     const road::Route& route,
                     const std::vector<Obstacle>& obstacles,
                     const MacroPath* prev, const MacroWeights& w,
                     const ClearanceParams& cp = {});

}  // namespace uak::plan
