#include "uak/road/route.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <queue>
#include <set>

namespace uak::road {
namespace {

struct QueueEntry {
  double cost;
  Id link;
  bool operator>(const QueueEntry& other) const {
    if (cost != other.cost) return cost > other.cost;
    return link > other.link;
  }
};

bool contains_node(const RoadLink& link, const Id& node) {
  return std::find(link.node_ids.begin(), link.node_ids.end(), node) !=
         link.node_ids.end();
}

// Cost propagation from every link containing the start node; returns the
// best goal-touching link, or nullopt when the goal is unreachable.
struct Propagation {
  std::map<Id, double> dist;
  std::map<Id, Id> pred;
  std::optional<Id> best_goal;
};

Propagation propagate(const RoadGraph& graph, const Id& start, const Id& goal,
                      const RouteConfig& cfg, bool allow_parallel) {
  Propagation out;
  std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>> open;
  for (const RoadLink& l : graph.links()) {
    if (contains_node(l, start)) {
      out.dist[l.id] = l.length;
      open.push({l.length, l.id});
    }
  }

  std::set<Id> settled;
  double best_goal_cost = std::numeric_limits<double>::infinity();
  while (!open.empty()) {
    const QueueEntry entry = open.top();
    open.pop();
    if (settled.count(entry.link)) continue;
    settled.insert(entry.link);

    const RoadLink& cur = graph.link(entry.link);
    if (contains_node(cur, goal) && entry.cost < best_goal_cost) {
      best_goal_cost = entry.cost;
      out.best_goal = entry.link;
    }

    auto relax = [&](const Id& next_id, double hop_penalty) {
      const RoadLink& next = graph.link(next_id);
      const double cost = entry.cost + hop_penalty + next.length;
      auto it = out.dist.find(next_id);
      if (it == out.dist.end() || cost < it->second) {
        out.dist[next_id] = cost;
        out.pred[next_id] = entry.link;
        open.push({cost, next_id});
      }
    };

    for (const Id& succ : cur.successors) relax(succ, 0.0);
    if (allow_parallel) {
      if (cur.left_link) relax(*cur.left_link, cfg.lane_change_penalty);
      if (cur.right_link) relax(*cur.right_link, cfg.lane_change_penalty);
    }
  }
  return out;
}

}  // namespace

Route plan_route(const RoadGraph& graph, const Id& start, const Id& goal,
                 const RouteConfig& cfg) {
  if (!graph.has_node(start)) throw UnknownNode("unknown start node '" + start + "'");
  if (!graph.has_node(goal)) throw UnknownNode("unknown goal node '" + goal + "'");

  Route route;
  if (start == goal) {
    route.polyline = {graph.node(start).position};
    return route;
  }

  Propagation prop = propagate(graph, start, goal, cfg, false);
  if (!prop.best_goal) prop = propagate(graph, start, goal, cfg, true);
  if (!prop.best_goal) {
    throw NoRoute("no route from '" + start + "' to '" + goal + "'");
  }

  // Walk the predecessor chain back to a seed link.
  std::vector<Id> chain;
  Id cursor = *prop.best_goal;
  chain.push_back(cursor);
  while (true) {
    auto it = prop.pred.find(cursor);
    if (it == prop.pred.end()) break;
    cursor = it->second;
    chain.push_back(cursor);
  }
  std::reverse(chain.begin(), chain.end());

  route.link_ids = chain;
  route.total_cost = prop.dist.at(*prop.best_goal);
  for (const Id& link_id : chain) {
    const std::vector<geom::Vec2> pts = graph.link_polyline(link_id);
    for (const geom::Vec2& p : pts) {
      if (!route.polyline.empty() &&
          (route.polyline.back() - p).norm() < 1e-9) {
        continue;
      }
      route.polyline.push_back(p);
    }
  }
  return route;
}

}  // namespace uak::road
