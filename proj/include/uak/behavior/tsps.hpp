#pragma once

#include <optional>
#include <string>
#include <vector>

#include "uak/road/lattice.hpp"

namespace uak::behavior {

// Tracked traffic participant with an optional constant-velocity forecast.
struct AgentTrack {
  int id = 0;
  geom::Vec2 position{0.0, 0.0};
  geom::Vec2 velocity{0.0, 0.0};
  geom::Vec2 footprint{2.0, 1.0};  // half extents along/across heading [m]
  std::vector<geom::Vec2> predicted;
};

enum class SignalPhase { Red, Yellow, Green, GreenLeft };
const char* signal_phase_name(SignalPhase phase);

struct SignalState {
  std::string intersection;
  SignalPhase phase = SignalPhase::Red;
  double remaining = 0.0;  // [s]
};

enum class TurnScenario { Straight, TurnLeft, TurnRight };

enum class PathChoice { GlobalRoute, MicroPath, EgoLane, Halt };
const char* path_choice_name(PathChoice choice);

struct PathDecision {
  PathChoice choice = PathChoice::GlobalRoute;
};

// Snapshot of everything the per-cycle path selection looks at.
struct TspsInput {
  bool route_feasible = true;
  bool route_blocked = false;  // zero-clearance blockage on the route itself
  bool micro_feasible = true;
  int stuck_counter = 0;
  bool near_signal = false;
  std::optional<SignalState> signal;
  TurnScenario turn_scenario = TurnScenario::Straight;
  bool side_area_occupied = false;
  double ego_speed = 0.0;  // [m/s]
};

// Agents within 3 m lateral of the lattice centerline advance along the lane
// at their current speed (keeping the lateral offset); everything else moves
// straight at constant velocity. Predictions are placed on a uniform dt grid
// out to the horizon.
std::vector<AgentTrack> predict_agents(const std::vector<AgentTrack>& tracks,
                                       const road::ExtendedRoadGraph& lattice,
                                       double horizon, double dt = 0.1);

// Counts consecutive cycles at standstill; a red signal legitimizes waiting
// and freezes the count, and any motion above 0.1 m/s clears it.
int update_stuck_counter(int counter, double ego_speed,
                         const std::optional<SignalState>& signal);

// Fixed-precedence path selection:
//   (1) feasible route -> GlobalRoute
//   (2) stuck past the threshold -> MicroPath escape
//   (3) no feasible micro path -> GlobalRoute (keep lane)
//   (4) turning at a signalized intersection -> GlobalRoute
//   (5) side safety area occupied -> EgoLane
//   (6) otherwise -> MicroPath
// A GlobalRoute choice degrades to Halt when the route is infeasible and
// physically blocked at zero clearance.
PathDecision tsps_decide(const TspsInput& input, int stuck_threshold = 30);

}  // namespace uak::behavior
