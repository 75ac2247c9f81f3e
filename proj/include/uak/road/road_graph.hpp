#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "uak/error.hpp"
#include "uak/geom/polyline.hpp"
#include "uak/geom/pose2.hpp"

namespace uak::road {

UAK_DEFINE_ERROR(ParseError);
UAK_DEFINE_ERROR(DanglingReference);
UAK_DEFINE_ERROR(LengthMismatch);
UAK_DEFINE_ERROR(UnknownNode);

using Id = std::string;

struct RoadNode {
  Id id;
  geom::Vec2 position{0.0, 0.0};
};

enum class RoadType { Straight, Curve, Intersection };

RoadType road_type_from_string(const std::string& name);
const char* road_type_name(RoadType type);

struct RoadLink {
  Id id;
  std::vector<Id> node_ids;        // ordered along the driving direction
  std::optional<Id> left_link;     // parallel lane to the left
  std::optional<Id> right_link;    // parallel lane to the right
  RoadType road_type = RoadType::Straight;
  std::vector<Id> successors;
  double length = 0.0;
};

struct LanePolyline {
  Id id;
  std::vector<geom::Vec2> points;
  std::string attribute;  // e.g. "center", "boundary"
};

class RoadGraph {
 public:
  void add_node(RoadNode node);
  void add_link(RoadLink link);
  void add_lane(LanePolyline lane);

  const std::vector<RoadNode>& nodes() const { return nodes_; }
  const std::vector<RoadLink>& links() const { return links_; }
  const std::vector<LanePolyline>& lanes() const { return lanes_; }

  bool has_node(const Id& id) const { return node_index_.count(id) > 0; }
  bool has_link(const Id& id) const { return link_index_.count(id) > 0; }
  const RoadNode& node(const Id& id) const;
  const RoadLink& link(const Id& id) const;

  // Node positions of a link, in driving order.
  std::vector<geom::Vec2> link_polyline(const Id& link_id) const;

  // Checks id resolution and stored-vs-geometric link lengths; throws
  // DanglingReference / LengthMismatch naming the offending element.
  void validate() const;

 private:
  std::vector<RoadNode> nodes_;
  std::vector<RoadLink> links_;
  std::vector<LanePolyline> lanes_;
  std::unordered_map<Id, std::size_t> node_index_;
  std::unordered_map<Id, std::size_t> link_index_;
};

// Reads a `.roadgraph.json` document (see docs/formats.md) and validates it.
RoadGraph load_roadgraph(const std::filesystem::path& path);
void save_roadgraph(const RoadGraph& graph, const std::filesystem::path& path);

struct NearestLink {
  Id link_id;
  double lateral = 0.0;  // signed offset, left of the link positive
  double station = 0.0;  // arc length along the link
};

// Closest link centerline to the pose; exact distance ties go to the
// lexicographically smaller link id.
NearestLink nearest_link(const RoadGraph& graph, const geom::Pose2& pose);

}  // namespace uak::road
