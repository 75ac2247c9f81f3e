#include "uak/road/road_graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "json.hpp"

namespace uak::road {

RoadType road_type_from_string(const std::string& name) {
  if (name == "straight") return RoadType::Straight;
  if (name == "curve") return RoadType::Curve;
  if (name == "intersection") return RoadType::Intersection;
  throw ParseError("unknown road type '" + name + "'");
}

const char* road_type_name(RoadType type) {
  switch (type) {
    case RoadType::Straight: return "straight";
    case RoadType::Curve: return "curve";
    case RoadType::Intersection: return "intersection";
  }
  return "straight";
}

void RoadGraph::add_node(RoadNode node) {
  if (node_index_.count(node.id)) {
    throw ParseError("duplicate node id '" + node.id + "'");
  }
  node_index_[node.id] = nodes_.size();
  nodes_.push_back(std::move(node));
}

void RoadGraph::add_link(RoadLink link) {
  if (link_index_.count(link.id)) {
    throw ParseError("duplicate link id '" + link.id + "'");
  }
  link_index_[link.id] = links_.size();
  links_.push_back(std::move(link));
}

void RoadGraph::add_lane(LanePolyline lane) { lanes_.push_back(std::move(lane)); }

const RoadNode& RoadGraph::node(const Id& id) const {
  auto it = node_index_.find(id);
  if (it == node_index_.end()) throw UnknownNode("unknown node '" + id + "'");
  return nodes_[it->second];
}

const RoadLink& RoadGraph::link(const Id& id) const {
  auto it = link_index_.find(id);
  if (it == link_index_.end()) {
    throw DanglingReference("unknown link '" + id + "'");
  }
  return links_[it->second];
}

std::vector<geom::Vec2> RoadGraph::link_polyline(const Id& link_id) const {
  const RoadLink& l = link(link_id);
  std::vector<geom::Vec2> pts;
  pts.reserve(l.node_ids.size());
  for (const Id& nid : l.node_ids) pts.push_back(node(nid).position);
  return pts;
}

void RoadGraph::validate() const {
  for (const RoadLink& l : links_) {
    if (l.node_ids.size() < 2) {
      throw ParseError("link '" + l.id + "' has fewer than 2 nodes");
    }
    double geom_length = 0.0;
    for (std::size_t i = 0; i < l.node_ids.size(); ++i) {
      auto it = node_index_.find(l.node_ids[i]);
      if (it == node_index_.end()) {
        throw DanglingReference("link '" + l.id + "' references missing node '" +
                                l.node_ids[i] + "'");
      }
      if (i > 0) {
        geom_length += (nodes_[it->second].position -
                        node(l.node_ids[i - 1]).position)
                           .norm();
      }
    }
    if (std::abs(geom_length - l.length) > 1e-6) {
      throw LengthMismatch("link '" + l.id + "' stored length " +
                           std::to_string(l.length) +
                           " disagrees with node geometry " +
                           std::to_string(geom_length));
    }
    for (const std::optional<Id>& side : {l.left_link, l.right_link}) {
      if (side && !link_index_.count(*side)) {
        throw DanglingReference("link '" + l.id +
                                "' references missing parallel link '" + *side +
                                "'");
      }
    }
    for (const Id& succ : l.successors) {
      if (!link_index_.count(succ)) {
        throw DanglingReference("link '" + l.id +
                                "' references missing successor '" + succ +
                                "'");
      }
    }
  }
}

RoadGraph load_roadgraph(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ParseError("cannot open road graph: " + path.string());
  nlohmann::json doc;
  try {
    is >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("invalid road-graph document " + path.string() + ": " +
                     e.what());
  }

  RoadGraph graph;
  try {
    for (const auto& jn : doc.at("nodes")) {
      RoadNode node;
      node.id = jn.at("id").get<std::string>();
      node.position = {jn.at("x").get<double>(), jn.at("y").get<double>()};
      graph.add_node(std::move(node));
    }
    for (const auto& jl : doc.at("links")) {
      RoadLink link;
      link.id = jl.at("id").get<std::string>();
      for (const auto& nid : jl.at("nodes")) {
        link.node_ids.push_back(nid.get<std::string>());
      }
      if (jl.contains("left") && !jl["left"].is_null()) {
        link.left_link = jl["left"].get<std::string>();
      }
      if (jl.contains("right") && !jl["right"].is_null()) {
        link.right_link = jl["right"].get<std::string>();
      }
      link.road_type = road_type_from_string(
          jl.value("type", std::string("straight")));
      if (jl.contains("successors")) {
        for (const auto& sid : jl["successors"]) {
          link.successors.push_back(sid.get<std::string>());
        }
      }
      if (jl.contains("length")) {
        link.length = jl["length"].get<double>();
      } else {
        double acc = 0.0;
        for (std::size_t i = 1; i < link.node_ids.size(); ++i) {
          acc += (graph.node(link.node_ids[i]).position -
                  graph.node(link.node_ids[i - 1]).position)
                     .norm();
        }
        link.length = acc;
      }
      graph.add_link(std::move(link));
    }
    if (doc.contains("lanes")) {
      for (const auto& jl : doc["lanes"]) {
        LanePolyline lane;
        lane.id = jl.at("id").get<std::string>();
        for (const auto& jp : jl.at("points")) {
          lane.points.emplace_back(jp.at(0).get<double>(),
                                   jp.at(1).get<double>());
        }
        lane.attribute = jl.value("attribute", std::string());
        graph.add_lane(std::move(lane));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("invalid road-graph document " + path.string() + ": " +
                     e.what());
  }

  graph.validate();
  return graph;
}

void save_roadgraph(const RoadGraph& graph, const std::filesystem::path& path) {
  nlohmann::json doc;
  doc["nodes"] = nlohmann::json::array();
  for (const RoadNode& n : graph.nodes()) {
    doc["nodes"].push_back(
        {{"id", n.id}, {"x", n.position.x()}, {"y", n.position.y()}});
  }
  doc["links"] = nlohmann::json::array();
  for (const RoadLink& l : graph.links()) {
    nlohmann::json jl;
    jl["id"] = l.id;
    jl["nodes"] = l.node_ids;
    if (l.left_link) jl["left"] = *l.left_link;
    if (l.right_link) jl["right"] = *l.right_link;
    jl["type"] = road_type_name(l.road_type);
    jl["successors"] = l.successors;
    jl["length"] = l.length;
    doc["links"].push_back(std::move(jl));
  }
  doc["lanes"] = nlohmann::json::array();
  for (const LanePolyline& lane : graph.lanes()) {
    nlohmann::json jl;
    jl["id"] = lane.id;
    jl["points"] = nlohmann::json::array();
    for (const geom::Vec2& p : lane.points) {
      jl["points"].push_back({p.x(), p.y()});
    }
    jl["attribute"] = lane.attribute;
    doc["lanes"].push_back(std::move(jl));
  }
  std::ofstream os(path);
  if (!os) throw ParseError("cannot write road graph: " + path.string());
  os << doc.dump(2) << "\n";
}

NearestLink nearest_link(const RoadGraph& graph, const geom::Pose2& pose) {
  if (graph.links().empty()) {
    throw UnknownNode("nearest_link on an empty graph");
  }
  std::vector<const RoadLink*> ordered;
  ordered.reserve(graph.links().size());
  for (const RoadLink& l : graph.links()) ordered.push_back(&l);
  std::sort(ordered.begin(), ordered.end(),
            [](const RoadLink* a, const RoadLink* b) { return a->id < b->id; });

  NearestLink best;
  double best_distance = std::numeric_limits<double>::infinity();
  for (const RoadLink* l : ordered) {
    const std::vector<geom::Vec2> poly = graph.link_polyline(l->id);
    const geom::FrenetCoord fc = geom::frenet_project(poly, pose.position());
    const double distance = std::abs(fc.lateral);
    if (distance < best_distance) {
      best_distance = distance;
      best = NearestLink{l->id, fc.lateral, fc.station};
    }
  }
  return best;
}

}  // namespace uak::road
