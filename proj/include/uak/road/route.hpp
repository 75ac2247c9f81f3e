#pragma once

#include "uak/road/road_graph.hpp"

namespace uak::road {

UAK_DEFINE_ERROR(NoRoute);

struct Route {
  std::vector<Id> link_ids;
  std::vector<geom::Vec2> polyline;
  double total_cost = 0.0;
};

struct RouteConfig {
  double lane_change_penalty = 5.0;  // added per parallel-lane hop
};

// Minimum-cost route between two nodes. Link cost is the link length;
// same-lane successor routes are preferred, and parallel-lane (left/right)
// hops are only explored when no same-lane route reaches the goal, each hop
// paying lane_change_penalty. Throws UnknownNode / NoRoute.
Route plan_route(const RoadGraph& graph, const Id& start, const Id& goal,
                 const RouteConfig& cfg = {});

}  // namespace uak::road
