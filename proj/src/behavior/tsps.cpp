#include "uak/behavior/tsps.hpp"

#include <cmath>

#include "uak/geom/polyline.hpp"

namespace uak::behavior {

namespace {

constexpr double kOnLaneLateral = 3.0;  // [m]

std::vector<geom::Vec2> lattice_centerline(
    const road::ExtendedRoadGraph& lattice) {
  std::vector<geom::Vec2> centerline;
  centerline.reserve(lattice.layer_count());
  for (const auto& layer : lattice.layers) {
    for (const auto& v : layer) {
      if (v.lateral_index == 0) {
        centerline.emplace_back(v.x, v.y);
        break;
      }
    }
  }
  return centerline;
}

}  // namespace

const char* signal_phase_name(SignalPhase phase) {
  switch (phase) {
    case SignalPhase::Red: return "Red";
    case SignalPhase::Yellow: return "Yellow";
    case SignalPhase::Green: return "Green";
    case SignalPhase::GreenLeft: return "GreenLeft";
  }
  return "?";
}

const char* path_choice_name(PathChoice choice) {
  switch (choice) {
    case PathChoice::GlobalRoute: return "GlobalRoute";
    case PathChoice::MicroPath: return "MicroPath";
    case PathChoice::EgoLane: return "EgoLane";
    case PathChoice::Halt: return "Halt";
  }
  return "?";
}

std::vector<AgentTrack> predict_agents(const std::vector<AgentTrack>& tracks,
                                       const road::ExtendedRoadGraph& lattice,
                                       double horizon, double dt) {
  const std::vector<geom::Vec2> centerline = lattice_centerline(lattice);
  const int steps = static_cast<int>(std::floor(horizon / dt + 1e-9));

  std::vector<AgentTrack> out = tracks;
  for (AgentTrack& agent : out) {
    agent.predicted.clear();
    agent.predicted.reserve(steps);
    const double speed = agent.velocity.norm();

    bool on_lane = false;
    geom::FrenetCoord anchor;
    double direction = 1.0;
    if (centerline.size() >= 2) {
      anchor = geom::frenet_project(centerline, agent.position);
      if (std::abs(anchor.lateral) <= kOnLaneLateral) {
        on_lane = true;
        const geom::Vec2 tangent =
            geom::tangent_at_station(centerline, anchor.station);
        if (agent.velocity.dot(tangent) < 0.0) direction = -1.0;
      }
    }

    for (int k = 1; k <= steps; ++k) {
      const double t = k * dt;
      if (on_lane) {
        const geom::FrenetCoord ahead{anchor.station + direction * speed * t,
                                      anchor.lateral};
        agent.predicted.push_back(geom::frenet_embed(centerline, ahead));
      } else {
        agent.predicted.push_back(agent.position + t * agent.velocity);
      }
    }
  }
  return out;
}

int update_stuck_counter(int counter, double ego_speed,
                         const std::optional<SignalState>& signal) {
  if (ego_speed >= 0.1) return 0;
  if (signal.has_value() && signal->phase == SignalPhase::Red) return counter;
  return counter + 1;
}

PathDecision tsps_decide(const TspsInput& input, int stuck_threshold) {
  PathChoice choice;
  if (input.route_feasible) {
    choice = PathChoice::GlobalRoute;
  } else if (input.stuck_counter >= stuck_threshold) {
    choice = PathChoice::MicroPath;
  } else if (!input.micro_feasible) {
    choice = PathChoice::GlobalRoute;
  } else if (input.near_signal &&
             (input.turn_scenario == TurnScenario::TurnLeft ||
              input.turn_scenario == TurnScenario::TurnRight)) {
    choice = PathChoice::GlobalRoute;
  } else if (input.side_area_occupied) {
    choice = PathChoice::EgoLane;
  } else {
    choice = PathChoice::MicroPath;
  }

  if (choice == PathChoice::GlobalRoute && !input.route_feasible &&
      input.route_blocked) {
    choice = PathChoice::Halt;
  }
  return PathDecision{choice};
}

}  // namespace uak::behavior
