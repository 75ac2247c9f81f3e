#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "uak/behavior/gvp.hpp"
#include "uak/behavior/tsps.hpp"
#include "uak/road/road_graph.hpp"
#include "uak/road/route.hpp"
#include "uak/sim/spat.hpp"
#include "uak/sim/vehicle.hpp"

namespace uak::sim {

UAK_DEFINE_ERROR(ConfigError);

// Scripted vehicle: spawns on a link and follows the lane (successor chain)
// at a target speed, yielding to traffic ahead.
struct NpcSpec {
  road::Id spawn_link;
  double station = 0.0;  // [m] along the spawn link
  double speed = 3.0;    // target speed [m/s]
};

struct SignalSpec {
  SignalSchedule schedule;
  road::Id stop_node;  // road-graph node marking the stop line
};

struct EgoParams {
  double speed_limit = 8.0;  // [m/s]
  double wheelbase = 2.7;
  geom::Vec2 half_extents{2.3, 0.95};
  double max_accel = 2.0;  // [m/s^2]
  double max_decel = 3.0;  // [m/s^2]
};

struct ScenarioConfig {
  std::filesystem::path map_path;
  road::Id start_node;
  road::Id goal_node;
  std::vector<NpcSpec> npcs;
  std::vector<SignalSpec> signals;
  double tau = 0.75;  // GVP aggressiveness
  std::uint64_t seed = 0;
  double duration = 60.0;  // [s], must be a multiple of dt
  double dt = 0.1;         // [s]
  EgoParams ego;

  // Throws ConfigError naming the offending key.
  void validate() const;
};

// Reads a scenario JSON document (see docs/formats.md). Unknown keys are
// rejected by name; the map path resolves relative to the config file.
ScenarioConfig load_scenario(const std::filesystem::path& path);

// Same, after applying dotted-path overrides ("tau=0.5",
// "ego.speed_limit=12", "npcs.0.speed=2.5") on top of the file's JSON.
// Values parse as JSON literals, falling back to plain strings.
ScenarioConfig load_scenario(const std::filesystem::path& path,
                             std::span<const std::string> overrides);

struct AgentRecord {
  int id = 0;
  geom::Pose2 pose;
  double speed = 0.0;
};

struct StepRecord {
  double t = 0.0;
  geom::Pose2 ego;
  double speed = 0.0;
  double steer = 0.0;
  behavior::PathChoice decision = behavior::PathChoice::GlobalRoute;
  double v_ref = 0.0;  // commanded speed for this step
  int stuck = 0;
  double station = 0.0;  // course station, wrapped on closed courses
  int lap = 0;
  std::vector<AgentRecord> agents;
};

enum class EventKind { Overtake, Collision, RedViolation };
const char* event_kind_name(EventKind kind);

struct SimEvent {
  double t = 0.0;
  EventKind kind = EventKind::Overtake;
  int agent_id = -1;  // NPC involved, -1 when not applicable
};

struct SimMetrics {
  double progress = 0.0;  // total distance advanced along the course [m]
  // Conservative proxy: center distance minus bounding radii; may dip
  // negative during legal close passes.
  double min_clearance = std::numeric_limits<double>::infinity();
  // Minimum speed after the ego first reaches 90% of the speed limit
  // (0 when it never gets there).
  double min_speed = 0.0;
  std::vector<double> lap_times;  // [s], one per course completion
  int overtakes = 0;
  int collisions = 0;
  int red_violations = 0;
  bool reached_goal = false;
};

struct SimLog {
  std::vector<StepRecord> records;
  std::vector<SimEvent> events;
  SimMetrics metrics;
};

// Full closed-loop run: perceive -> decide -> plan -> blend velocity ->
// track -> step plant and scripted vehicles, with event detection. The loop
// is single-threaded; identical config (including seed) gives bit-identical
// logs.
SimLog run_scenario(const ScenarioConfig& config);
SimLog run_scenario(const ScenarioConfig& config,
                    const road::RoadGraph& graph);

}  // namespace uak::sim
