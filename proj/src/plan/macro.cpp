#include "uak/plan/macro.hpp"

#include <cmath>
#include <limits>

#include "uak/geom/polyline.hpp"

namespace uak::plan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double vertex_heuristic(const road::LatticeVertex& v,
                        const std::vector<geom::Vec2>& route_polyline,
                        const std::vector<Obstacle>& obstacles,
                        const MacroPath* prev, const MacroWeights& w,
                        const ClearanceParams& cp) {
  const geom::Vec2 p{v.x, v.y};
  double g = w.k_obstacle * obstacle_barrier(min_clearance(p, obstacles),
                                             cp.c_max);
  g += w.k_curvature * std::abs(v.kappa);
  if (prev != nullptr && prev->polyline.size() >= 2) {
    g += w.k_transient * geom::distance_to_polyline(prev->polyline, p);
  }
  if (route_polyline.size() >= 2) {
    g += w.k_route * geom::distance_to_polyline(route_polyline, p);
  }
  return g;
}

}  // namespace

MacroPath plan_macro(const road::ExtendedRoadGraph& lattice,
                     const road::Route& route,
                     const std::vector<Obstacle>& obstacles,
                     const MacroPath* prev, const MacroWeights& w,
                     const ClearanceParams& cp) {
  const std::size_t n_layers = lattice.layer_count();
  if (n_layers == 0) throw NoFeasiblePath("lattice has no layers");

  // Per-vertex heuristic cost; pruned vertices get +inf.
  std::vector<std::vector<double>> g(n_layers);
  for (std::size_t k = 0; k < n_layers; ++k) {
    g[k].reserve(lattice.layers[k].size());
    for (const auto& v : lattice.layers[k]) {
      const geom::Vec2 p{v.x, v.y};
      if (min_clearance(p, obstacles) < cp.hard_margin()) {
        g[k].push_back(kInf);
      } else {
        g[k].push_back(vertex_heuristic(v, route.polyline, obstacles, prev,
                                        w, cp));
      }
    }
  }

  std::vector<std::vector<double>> dp(n_layers);
  std::vector<std::vector<int>> back(n_layers);
  dp[0] = g[0];
  back[0].assign(g[0].size(), -1);

  for (std::size_t k = 0; k + 1 < n_layers; ++k) {
    dp[k + 1].assign(lattice.layers[k + 1].size(), kInf);
    back[k + 1].assign(lattice.layers[k + 1].size(), -1);
    for (std::size_t i = 0; i < lattice.layers[k].size(); ++i) {
      if (!std::isfinite(dp[k][i])) continue;
      const auto& vi = lattice.layers[k][i];
      for (int j : lattice.connectivity[k][i]) {
        if (!std::isfinite(g[k + 1][j])) continue;
        const auto& vj = lattice.layers[k + 1][j];
        const double dist = std::hypot(vj.x - vi.x, vj.y - vi.y);
        const double cand = dp[k][i] + dist + g[k + 1][j];
        if (cand < dp[k + 1][j]) {
          dp[k + 1][j] = cand;
          back[k + 1][j] = static_cast<int>(i);
        }
      }
    }
  }

  int best = -1;
  double best_cost = kInf;
  const auto& last = dp[n_layers - 1];
  for (std::size_t j = 0; j < last.size(); ++j) {
    if (last[j] < best_cost) {
      best_cost = last[j];
      best = static_cast<int>(j);
    }
  }
  if (best < 0) {
    throw NoFeasiblePath("every path through the lattice is pruned");
  }

  MacroPath path;
  path.cost = best_cost;
  std::vector<int> chain(n_layers, -1);
  chain[n_layers - 1] = best;
  for (std::size_t k = n_layers - 1; k > 0; --k) {
    chain[k - 1] = back[k][chain[k]];
  }
  path.vertices.reserve(n_layers);
  path.polyline.reserve(n_layers);
  for (std::size_t k = 0; k < n_layers; ++k) {
    const auto& v = lattice.layers[k][chain[k]];
    path.vertices.push_back(v);
    path.polyline.emplace_back(v.x, v.y);
  }
  return path;
}

}  // namespace uak::plan
