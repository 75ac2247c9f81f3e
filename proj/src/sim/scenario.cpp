#include "uak/sim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>

#include "json.hpp"
#include "uak/geom/polyline.hpp"
#include "uak/plan/macro.hpp"
#include "uak/plan/micro.hpp"
#include "uak/plan/primitive.hpp"
#include "uak/road/lattice.hpp"

namespace uak::sim {

namespace {

using nlohmann::json;

constexpr double kLaneOffset = 3.5;        // lattice lateral spacing [m]
constexpr double kStationStep = 5.0;       // lattice layer spacing [m]
constexpr double kCorridorHalfWidth = 1.75;  // lane-blocked gate [m]
constexpr double kEngageRange = 30.0;      // GVP target lookahead [m]
constexpr double kRouteCheckRange = 35.0;  // route-feasibility lookahead [m]
constexpr double kMergeMargin = 8.0;       // keep planning until this far past [m]
constexpr double kAccRange = 40.0;         // lead-vehicle search range [m]
constexpr double kSignalRange = 30.0;      // stop-line awareness [m]
constexpr double kDistFloor = 0.05;        // GVP lateral distance floor [maps]
constexpr double kMicroRoadWidth = 5.0;    // micro candidate span [m]
constexpr double kMicroHorizon = 4.0;      // micro horizon [s]
constexpr int kMicroLateralCount = 7;
constexpr int kStuckThreshold = 30;
constexpr double kWrapMargin = 80.0;       // extension past the seam [m]

void expect_keys(const json& obj, const std::string& where,
                 std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* k) {
          return item.key() == k;
        }) == allowed.end()) {
      throw ConfigError("unknown key '" + item.key() + "' in " + where);
    }
  }
}

behavior::SignalPhase phase_from_string(const std::string& name) {
  if (name == "Red") return behavior::SignalPhase::Red;
  if (name == "Yellow") return behavior::SignalPhase::Yellow;
  if (name == "Green") return behavior::SignalPhase::Green;
  if (name == "GreenLeft") return behavior::SignalPhase::GreenLeft;
  throw ConfigError("unknown signal phase '" + name + "'");
}

// ---------------------------------------------------------------------------
// Course geometry: the planned route, extended past the seam on closed
// circuits so planning and tracking near the wrap see a continuous path.

struct Course {
  std::vector<geom::Vec2> polyline;  // one pass over the route
  std::vector<geom::Vec2> extended;  // + wrap margin when closed
  double length = 0.0;
  bool closed = false;
};

Course make_course(const road::Route& route, const road::RoadGraph& graph) {
  Course c;
  c.polyline = route.polyline;

  // Circuit detection. The route planner works at link granularity, so a lap
  // of a ring ends a link or two short of where it began; when the last route
  // link chains back to the first within a few successor hops, splice that
  // connector geometry in so the lap closes exactly.
  if (route.link_ids.size() >= 2) {
    std::vector<road::Id> connector;
    road::Id cur = route.link_ids.back();
    for (int hop = 0; hop < 4; ++hop) {
      const road::RoadLink& link = graph.link(cur);
      if (link.successors.empty()) break;
      cur = link.successors.front();
      if (cur == route.link_ids.front()) {
        for (const road::Id& id : connector) {
          for (const geom::Vec2& p : graph.link_polyline(id)) {
            if ((c.polyline.back() - p).norm() < 1e-9) continue;
            c.polyline.push_back(p);
          }
        }
        c.closed = true;
        break;
      }
      connector.push_back(cur);
    }
  }
  c.closed = c.closed || (c.polyline.size() >= 3 &&
                          (c.polyline.front() - c.polyline.back()).norm() <
                              1.0);

  c.length = geom::polyline_length(c.polyline);
  c.extended = c.polyline;
  if (c.closed) {
    double margin = 0.0;
    for (std::size_t i = 1; i + 1 < c.polyline.size() && margin < kWrapMargin;
         ++i) {
      margin += (c.polyline[i] - c.polyline[i - 1]).norm();
      c.extended.push_back(c.polyline[i]);
    }
  } else if (c.polyline.size() >= 2) {
    // Straight run-out past an open course's end so tracking keeps a full
    // lookahead through the goal instead of braking for the map edge.
    const geom::Vec2 tail = geom::tangent_at_station(c.polyline, c.length);
    c.extended.push_back(c.polyline.back() + kWrapMargin * tail);
  }
  return c;
}

// Sub-polyline between two stations (clamped), with interpolated endpoints.
std::vector<geom::Vec2> sub_polyline(std::span<const geom::Vec2> points,
                                     double lo, double hi) {
  const double total = geom::polyline_length(points);
  lo = std::clamp(lo, 0.0, total);
  hi = std::clamp(hi, 0.0, total);
  std::vector<geom::Vec2> out;
  out.push_back(geom::point_at_station(points, lo));
  double acc = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    acc += (points[i] - points[i - 1]).norm();
    if (acc > lo && acc < hi) out.push_back(points[i]);
  }
  out.push_back(geom::point_at_station(points, hi));
  return out;
}

// Continuous station tracking: projects within a window around the previous
// station so the overlapping wrap extension can never grab the wrong lap.
double track_station(const Course& course, double s_prev,
                     const geom::Vec2& position) {
  const double lo = std::max(0.0, s_prev - 10.0);
  const double hi = s_prev + 25.0;
  const auto window = sub_polyline(course.extended, lo, hi);
  if (window.size() < 2) return s_prev;
  return lo + geom::frenet_project(window, position).station;
}

// Signed station difference on the course, wrap-aware for closed circuits;
// result in (-length/2, length/2].
double station_diff(const Course& course, double ahead, double behind) {
  double d = ahead - behind;
  if (course.closed) {
    while (d > 0.5 * course.length) d -= course.length;
    while (d <= -0.5 * course.length) d += course.length;
  }
  return d;
}

// ---------------------------------------------------------------------------
// Scripted vehicles.

struct Npc {
  int id = 0;
  std::vector<geom::Vec2> lane;
  double lane_length = 0.0;
  bool lane_closed = false;
  double station = 0.0;
  double speed = 0.0;
  double target_speed = 0.0;
  geom::Vec2 half{2.0, 0.9};
  geom::Pose2 pose;
  double course_station = 0.0;
  // Event bookkeeping.
  bool pass_armed = true;
  bool contact = false;
};

std::vector<geom::Vec2> chain_lane(const road::RoadGraph& graph,
                                   const road::Id& first, bool* closed) {
  std::vector<geom::Vec2> lane;
  *closed = false;
  road::Id cur = first;
  double guard = 0.0;
  while (true) {
    const std::vector<geom::Vec2> piece = graph.link_polyline(cur);
    for (const auto& p : piece) {
      if (!lane.empty() && (lane.back() - p).norm() < 1e-9) continue;
      if (!lane.empty()) guard += (lane.back() - p).norm();
      lane.push_back(p);
    }
    const road::RoadLink& link = graph.link(cur);
    if (link.successors.empty() || guard > 20000.0) break;
    cur = link.successors.front();
    if (cur == first) {
      *closed = true;
      break;
    }
  }
  return lane;
}

geom::Pose2 lane_pose(const Npc& npc) {
  const geom::Vec2 p = geom::point_at_station(npc.lane, npc.station);
  const geom::Vec2 t = geom::tangent_at_station(npc.lane, npc.station);
  return {p.x(), p.y(), std::atan2(t.y(), t.x())};
}

// ---------------------------------------------------------------------------

std::vector<plan::Obstacle> npc_obstacles(const std::vector<Npc>& npcs,
                                          double predict_horizon) {
  std::vector<plan::Obstacle> out;
  for (const Npc& npc : npcs) {
    const double heading = npc.pose.theta;
    const geom::Vec2 fwd{std::cos(heading), std::sin(heading)};
    const geom::Vec2 center{npc.pose.x, npc.pose.y};
    const double radius = npc.half.y() + 0.35;
    const geom::Vec2 vel = npc.speed * fwd;
    for (double along : {-1.4, 0.0, 1.4}) {
      out.push_back({center + along * fwd, radius, vel});
      // Constant-velocity forecast keeps the corridor ahead of a mover
      // blocked for the planner.
      out.push_back(
          {center + along * fwd + predict_horizon * vel, radius, vel});
    }
  }
  return out;
}

}  // namespace

const char* event_kind_name(EventKind kind) {
  switch (kind) {
    case EventKind::Overtake: return "overtake";
    case EventKind::Collision: return "collision";
    case EventKind::RedViolation: return "red_violation";
  }
  return "?";
}

void ScenarioConfig::validate() const {
  if (map_path.empty()) throw ConfigError("map: path is required");
  if (start_node.empty()) throw ConfigError("start: node id is required");
  if (goal_node.empty()) throw ConfigError("goal: node id is required");
  if (!(dt > 0.0)) throw ConfigError("dt: must be > 0");
  const double steps = duration / dt;
  if (duration <= 0.0 || std::abs(steps - std::round(steps)) > 1e-6) {
    throw ConfigError("duration: must be a positive multiple of dt");
  }
  if (tau < 0.0 || tau > 1.0) throw ConfigError("tau: must lie in [0, 1]");
  for (const NpcSpec& npc : npcs) {
    if (npc.spawn_link.empty()) throw ConfigError("npcs.link: id is required");
    if (npc.speed < 0.0) throw ConfigError("npcs.speed: must be >= 0");
    if (npc.station < 0.0) throw ConfigError("npcs.station: must be >= 0");
  }
  for (const SignalSpec& sig : signals) {
    if (sig.stop_node.empty()) {
      throw ConfigError("signals.stop_node: id is required");
    }
    if (sig.schedule.phases.empty()) {
      throw ConfigError("signals.phases: at least one phase is required");
    }
    for (const PhaseSpec& p : sig.schedule.phases) {
      if (!(p.duration > 0.0)) {
        throw ConfigError("signals.phases: durations must be > 0");
      }
    }
  }
  if (ego.speed_limit <= 0.0) {
    throw ConfigError("ego.speed_limit: must be > 0");
  }
}

namespace {

ScenarioConfig scenario_from_json(const json& doc,
                                  const std::filesystem::path& base_dir) {
  ScenarioConfig cfg;
  try {
    expect_keys(doc, "scenario",
                {"map", "start", "goal", "duration", "dt", "seed", "tau",
                 "ego", "npcs", "signals"});
    cfg.map_path = doc.at("map").get<std::string>();
    if (cfg.map_path.is_relative()) {
      cfg.map_path = base_dir / cfg.map_path;
    }
    cfg.start_node = doc.at("start").get<std::string>();
    cfg.goal_node = doc.at("goal").get<std::string>();
    cfg.duration = doc.value("duration", cfg.duration);
    cfg.dt = doc.value("dt", cfg.dt);
    cfg.seed = doc.value("seed", cfg.seed);
    cfg.tau = doc.value("tau", cfg.tau);
    if (doc.contains("ego")) {
      const json& ego = doc.at("ego");
      expect_keys(ego, "ego",
                  {"speed_limit", "wheelbase", "half_length", "half_width",
                   "max_accel", "max_decel"});
      cfg.ego.speed_limit = ego.value("speed_limit", cfg.ego.speed_limit);
      cfg.ego.wheelbase = ego.value("wheelbase", cfg.ego.wheelbase);
      cfg.ego.half_extents.x() =
          ego.value("half_length", cfg.ego.half_extents.x());
      cfg.ego.half_extents.y() =
          ego.value("half_width", cfg.ego.half_extents.y());
      cfg.ego.max_accel = ego.value("max_accel", cfg.ego.max_accel);
      cfg.ego.max_decel = ego.value("max_decel", cfg.ego.max_decel);
    }
    for (const json& npc : doc.value("npcs", json::array())) {
      expect_keys(npc, "npcs[]", {"link", "station", "speed"});
      NpcSpec spec;
      spec.spawn_link = npc.at("link").get<std::string>();
      spec.station = npc.value("station", 0.0);
      spec.speed = npc.value("speed", 3.0);
      cfg.npcs.push_back(spec);
    }
    for (const json& sig : doc.value("signals", json::array())) {
      expect_keys(sig, "signals[]", {"intersection", "stop_node", "phases"});
      SignalSpec spec;
      spec.schedule.intersection =
          sig.value("intersection", std::string("junction"));
      spec.stop_node = sig.at("stop_node").get<std::string>();
      for (const json& ph : sig.at("phases")) {
        spec.schedule.phases.push_back(
            {phase_from_string(ph.at(0).get<std::string>()),
             ph.at(1).get<double>()});
      }
      cfg.signals.push_back(spec);
    }
  } catch (const json::exception& e) {
    throw ConfigError("scenario config: " + std::string(e.what()));
  }
  cfg.validate();
  return cfg;
}

json parse_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file: " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("scenario JSON parse error: " + std::string(e.what()));
  }
}

}  // namespace

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  return scenario_from_json(parse_scenario_file(path), path.parent_path());
}

ScenarioConfig load_scenario(const std::filesystem::path& path,
                             std::span<const std::string> overrides) {
  json doc = parse_scenario_file(path);
  for (const std::string& entry : overrides) {
    const std::size_t eq = entry.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError("override '" + entry + "': expected key=value");
    }
    std::string pointer = "/" + entry.substr(0, eq);
    for (char& c : pointer) {
      if (c == '.') c = '/';
    }
    const std::string raw = entry.substr(eq + 1);
    json value = json::parse(raw, nullptr, /*allow_exceptions=*/false);
    if (value.is_discarded()) value = raw;
    try {
      doc[json::json_pointer(pointer)] = value;
    } catch (const json::exception& e) {
      throw ConfigError("override '" + entry + "': " + std::string(e.what()));
    }
  }
  return scenario_from_json(doc, path.parent_path());
}

SimLog run_scenario(const ScenarioConfig& config) {
  const road::RoadGraph graph = road::load_roadgraph(config.map_path);
  return run_scenario(config, graph);
}

SimLog run_scenario(const ScenarioConfig& config,
                    const road::RoadGraph& graph) {
  config.validate();

  const road::Route route =
      road::plan_route(graph, config.start_node, config.goal_node);
  const Course course = make_course(route, graph);
  if (course.length < 2.0 * kStationStep) {
    throw ConfigError("route too short to simulate");
  }

  road::Route planning_route;
  planning_route.polyline = course.extended;
  const road::ExtendedRoadGraph lattice = road::build_extended_graph(
      graph, planning_route, kStationStep, {-kLaneOffset, 0.0, kLaneOffset});

  // Ego starts at the route origin, aligned with it, at rest.
  VehicleState ego;
  const geom::Vec2 t0 = geom::tangent_at_station(course.polyline, 0.0);
  ego.pose = {course.polyline.front().x(), course.polyline.front().y(),
              std::atan2(t0.y(), t0.x())};
  ego.wheelbase = config.ego.wheelbase;
  ego.half_extents = config.ego.half_extents;

  std::vector<Npc> npcs;
  for (std::size_t i = 0; i < config.npcs.size(); ++i) {
    const NpcSpec& spec = config.npcs[i];
    if (!graph.has_link(spec.spawn_link)) {
      throw ConfigError("npcs.link: unknown link '" + spec.spawn_link + "'");
    }
    Npc npc;
    npc.id = static_cast<int>(i);
    npc.lane = chain_lane(graph, spec.spawn_link, &npc.lane_closed);
    npc.lane_length = geom::polyline_length(npc.lane);
    npc.station = std::min(spec.station, npc.lane_length);
    npc.speed = spec.speed;
    npc.target_speed = spec.speed;
    npc.pose = lane_pose(npc);
    npc.course_station =
        geom::frenet_project(course.polyline, npc.pose.position()).station;
    npcs.push_back(std::move(npc));
  }

  struct StopLine {
    double station = 0.0;
    const SignalSpec* spec = nullptr;
    bool crossed_armed = true;
  };
  std::vector<StopLine> stop_lines;
  for (const SignalSpec& sig : config.signals) {
    if (!graph.has_node(sig.stop_node)) {
      throw ConfigError("signals.stop_node: unknown node '" + sig.stop_node +
                        "'");
    }
    StopLine line;
    line.station =
        geom::frenet_project(course.polyline,
                             graph.node(sig.stop_node).position)
            .station;
    line.spec = &sig;
    stop_lines.push_back(line);
  }

  behavior::GvpConfig gvp;
  gvp.tau = config.tau;
  gvp.acc.v_limit = config.ego.speed_limit;
  gvp.acc.max_accel = config.ego.max_accel;
  gvp.acc.max_decel = config.ego.max_decel;
  gvp.acc.dt = config.dt;

  const plan::ClearanceParams clearance{10.0, 2.0 * config.ego.half_extents.y(),
                                        0.3};
  const plan::MacroWeights macro_weights{6.0, 8.0, 0.5, 0.3};
  const plan::MicroWeights micro_weights{2.0, 1.0, 0.5};

  SimLog log;
  const int steps = static_cast<int>(std::round(config.duration / config.dt));
  log.records.reserve(steps);

  double ego_station = 0.0;
  int lap = 0;
  int stuck = 0;
  bool cruise_armed = false;
  double min_speed_cruise = std::numeric_limits<double>::infinity();
  std::optional<plan::MacroPath> prev_macro;
  std::optional<plan::MotionPrimitive> prev_micro;

  for (int k = 0; k < steps; ++k) {
    const double t = k * config.dt;
    const geom::Vec2 ego_pos = ego.pose.position();

    // --- Perception snapshot -------------------------------------------
    const std::vector<plan::Obstacle> obstacles = npc_obstacles(npcs, 1.0);

    // --- Signals ---------------------------------------------------------
    std::optional<behavior::SignalState> signal;
    double stop_distance = std::numeric_limits<double>::infinity();
    for (const StopLine& line : stop_lines) {
      const double ds = station_diff(course, line.station, ego_station);
      if (ds >= 0.0 && ds < kSignalRange && ds < stop_distance) {
        stop_distance = ds;
        signal = spat_feed(t, line.spec->schedule);
      }
    }

    stuck = behavior::update_stuck_counter(stuck, ego.speed, signal);

    // --- Route corridor assessment --------------------------------------
    // The window reaches behind the ego so a freshly passed vehicle keeps
    // planning engaged until the merge-back gap is adequate.
    bool route_free = true;
    bool route_blocked_static = false;
    for (const Npc& npc : npcs) {
      const double ds = station_diff(course, npc.course_station, ego_station);
      const double lateral =
          geom::distance_to_polyline(course.extended, npc.pose.position());
      if (ds > -kMergeMargin && ds < kRouteCheckRange &&
          lateral < kCorridorHalfWidth) {
        route_free = false;
        if (ds > 0.0 && ds < 8.0 && npc.speed < 0.1 && lateral < 0.5) {
          route_blocked_static = true;
        }
      }
    }

    // --- Macro / micro planning -----------------------------------------
    bool micro_ok = false;
    std::optional<plan::MotionPrimitive> micro;
    if (!route_free) {
      try {
        const plan::MacroPath macro = plan::plan_macro(
            lattice, planning_route, obstacles,
            prev_macro.has_value() ? &*prev_macro : nullptr, macro_weights,
            clearance);
        plan::BoundaryState state;
        state.x = ego_pos.x();
        state.dx = ego.speed * std::cos(ego.pose.theta);
        state.y = ego_pos.y();
        state.dy = ego.speed * std::sin(ego.pose.theta);
        const auto candidates = plan::sample_primitive_set(
            state, macro, kMicroRoadWidth,
            {config.ego.speed_limit, 0.5 * config.ego.speed_limit},
            kMicroLateralCount, kMicroHorizon);
        micro = plan::select_micro(
            candidates, obstacles,
            prev_micro.has_value() ? &*prev_micro : nullptr, micro_weights,
            clearance);
        micro_ok = true;
        prev_macro = macro;
      } catch (const Error&) {
        micro_ok = false;
      }
      // A transient planning dropout mid-maneuver must not yank the vehicle
      // back toward the hazard: commit to the last feasible primitive while
      // meaningful arc remains on it.
      if (!micro_ok && prev_micro.has_value()) {
        const double done =
            geom::frenet_project(prev_micro->samples, ego_pos).station;
        if (done < 0.8 * geom::polyline_length(prev_micro->samples)) {
          micro = prev_micro;
          micro_ok = true;
        }
      }
    }

    // --- Side safety area (both adjacent corridors) ----------------------
    bool side_occupied = false;
    for (const Npc& npc : npcs) {
      const double ds = station_diff(course, npc.course_station, ego_station);
      const double lateral =
          geom::distance_to_polyline(course.extended, npc.pose.position());
      if (ds > -5.0 && ds < 1.5 * 2.0 * config.ego.half_extents.x() &&
          lateral >= kCorridorHalfWidth && lateral < kLaneOffset + 1.75) {
        side_occupied = true;
      }
    }

    // --- Decision ---------------------------------------------------------
    behavior::TspsInput tsps;
    tsps.route_feasible = route_free;
    tsps.route_blocked = route_blocked_static;
    tsps.micro_feasible = micro_ok;
    tsps.stuck_counter = stuck;
    tsps.near_signal = signal.has_value();
    tsps.signal = signal;
    tsps.turn_scenario = behavior::TurnScenario::Straight;
    tsps.side_area_occupied = side_occupied;
    tsps.ego_speed = ego.speed;
    behavior::PathDecision decision = behavior::tsps_decide(tsps,
                                                            kStuckThreshold);
    if (decision.choice == behavior::PathChoice::MicroPath && !micro_ok) {
      // Escape branch fired without a usable primitive: keep the lane, or
      // hold position when the route itself carries a static blockage.
      decision.choice = (!route_free && route_blocked_static)
                            ? behavior::PathChoice::Halt
                            : behavior::PathChoice::GlobalRoute;
    }

    const bool use_micro =
        decision.choice == behavior::PathChoice::MicroPath && micro_ok;
    const std::vector<geom::Vec2>& exec_path =
        use_micro ? micro->samples : course.extended;
    if (use_micro) {
      prev_micro = micro;
    } else {
      prev_micro.reset();
      prev_macro.reset();
    }

    // --- Speed command ----------------------------------------------------
    double v_cmd = config.ego.speed_limit;

    // Geometry-aware blend against every vehicle ahead on the course; the
    // blend fades to the nominal speed as lateral separation grows, so far
    // or offset agents barely register.
    const double d_ego_t =
        std::max(geom::distance_to_polyline(exec_path, ego_pos), kDistFloor);
    const double d_ego_e = std::max(
        geom::distance_to_polyline(course.extended, ego_pos), kDistFloor);
    for (const Npc& npc : npcs) {
      const double ds = station_diff(course, npc.course_station, ego_station);
      if (ds <= 0.0 || ds >= kEngageRange) continue;
      const double d_npc_t = std::max(
          geom::distance_to_polyline(exec_path, npc.pose.position()),
          kDistFloor);
      const double d_npc_e =
          std::max(geom::distance_to_polyline(course.extended,
                                              npc.pose.position()),
                   kDistFloor);
      v_cmd = std::min(
          v_cmd, behavior::gvp_velocity(npc.speed, config.ego.speed_limit,
                                        d_npc_t, d_ego_t, d_npc_e, d_ego_e,
                                        config.tau));
    }

    // Adaptive cruise against a lead inside the executed corridor.
    for (const Npc& npc : npcs) {
      const double ds = station_diff(course, npc.course_station, ego_station);
      if (ds <= 0.0 || ds > kAccRange) continue;
      if (geom::distance_to_polyline(exec_path, npc.pose.position()) >=
          kCorridorHalfWidth) {
        continue;
      }
      const double gap =
          ds - config.ego.half_extents.x() - npc.half.x();
      v_cmd = std::min(v_cmd, behavior::acc_speed(std::max(0.0, gap),
                                                  npc.speed, ego.speed, gvp));
    }

    // Red (and yellow) signal: taper to a stop short of the line.
    if (signal.has_value() &&
        (signal->phase == behavior::SignalPhase::Red ||
         signal->phase == behavior::SignalPhase::Yellow)) {
      const double margin = 2.0 + config.ego.half_extents.x();
      v_cmd = std::min(v_cmd, std::max(0.0, 0.6 * (stop_distance - margin)));
    }

    if (decision.choice == behavior::PathChoice::Halt) v_cmd = 0.0;

    // --- Tracking and plant step -----------------------------------------
    const double lookahead = std::clamp(1.2 * ego.speed, 4.0, 9.0);
    double steer_cmd = 0.0;
    try {
      steer_cmd = pure_pursuit_steer(ego, exec_path, lookahead);
    } catch (const PathExhausted&) {
      try {
        steer_cmd = pure_pursuit_steer(ego, course.extended, lookahead);
      } catch (const PathExhausted&) {
        steer_cmd = 0.0;
        v_cmd = 0.0;
      }
    }
    const double accel =
        std::clamp((v_cmd - ego.speed) / config.dt, -config.ego.max_decel,
                   config.ego.max_accel);

    // --- Record ------------------------------------------------------------
    StepRecord rec;
    rec.t = t;
    rec.ego = ego.pose;
    rec.speed = ego.speed;
    rec.steer = ego.steer;
    rec.decision = decision.choice;
    rec.v_ref = v_cmd;
    rec.stuck = stuck;
    rec.station = ego_station;
    rec.lap = lap;
    for (const Npc& npc : npcs) {
      rec.agents.push_back({npc.id, npc.pose, npc.speed});
    }
    log.records.push_back(std::move(rec));

    ego = step_vehicle(ego, steer_cmd, accel, config.dt);

    // --- Step scripted vehicles -------------------------------------------
    for (Npc& npc : npcs) {
      double v_des = npc.target_speed;
      // Yield to any vehicle ahead on the same lane.
      double best_ds = kAccRange;
      double lead_speed = 0.0;
      bool has_lead = false;
      auto consider = [&](const geom::Vec2& pos, double speed, double half_len) {
        if (geom::distance_to_polyline(npc.lane, pos) >= kCorridorHalfWidth) {
          return;
        }
        const double s_other = geom::frenet_project(npc.lane, pos).station;
        double ds = s_other - npc.station;
        if (npc.lane_closed) {
          while (ds > 0.5 * npc.lane_length) ds -= npc.lane_length;
          while (ds <= -0.5 * npc.lane_length) ds += npc.lane_length;
        }
        ds -= npc.half.x() + half_len;
        if (ds > 0.0 && ds < best_ds) {
          best_ds = ds;
          lead_speed = speed;
          has_lead = true;
        }
      };
      consider(ego.pose.position(), ego.speed, config.ego.half_extents.x());
      for (const Npc& other : npcs) {
        if (other.id == npc.id) continue;
        consider(other.pose.position(), other.speed, other.half.x());
      }
      if (has_lead) {
        behavior::GvpConfig npc_cfg;
        npc_cfg.acc.v_limit = npc.target_speed;
        npc_cfg.acc.dt = config.dt;
        v_des = behavior::acc_speed(best_ds, lead_speed, npc.speed, npc_cfg);
      }
      const double dv = std::clamp(v_des - npc.speed, -3.0 * config.dt,
                                   1.5 * config.dt);
      npc.speed = std::max(0.0, npc.speed + dv);
      npc.station += npc.speed * config.dt;
      if (npc.lane_closed && npc.station >= npc.lane_length) {
        npc.station -= npc.lane_length;
      }
      npc.station = std::min(npc.station, npc.lane_length);
      npc.pose = lane_pose(npc);
      npc.course_station =
          track_station(course, npc.course_station, npc.pose.position());
      if (course.closed && npc.course_station >= course.length) {
        npc.course_station -= course.length;
      }
    }

    // --- Ego station / laps -------------------------------------------------
    const double s_new = track_station(course, ego_station,
                                       ego.pose.position());
    const double advance = s_new - ego_station;
    if (advance > 0.0) log.metrics.progress += advance;
    ego_station = s_new;
    if (course.closed && ego_station >= course.length) {
      ego_station -= course.length;
      ++lap;
      log.metrics.lap_times.push_back(t + config.dt);
    }
    if (!course.closed && !log.metrics.reached_goal &&
        ego_station >= course.length - 2.0) {
      log.metrics.reached_goal = true;
      log.metrics.lap_times.push_back(t + config.dt);
    }

    // --- Metrics / events ----------------------------------------------------
    // Cruise-speed dip is a mission metric: it stops accumulating once the
    // goal is reached (end-of-course braking is not part of the mission).
    if (!log.metrics.reached_goal) {
      if (ego.speed >= 0.9 * config.ego.speed_limit) cruise_armed = true;
      if (cruise_armed) {
        min_speed_cruise = std::min(min_speed_cruise, ego.speed);
      }
    }

    for (Npc& npc : npcs) {
      const double center_gap =
          (npc.pose.position() - ego.pose.position()).norm() -
          ego.half_extents.norm() - npc.half.norm();
      log.metrics.min_clearance =
          std::min(log.metrics.min_clearance, center_gap);

      const double rel = station_diff(course, ego_station, npc.course_station);
      if (npc.pass_armed && rel > 0.0 && rel < 15.0 &&
          (npc.pose.position() - ego.pose.position()).norm() < 12.0) {
        npc.pass_armed = false;
        log.events.push_back({t + config.dt, EventKind::Overtake, npc.id});
        ++log.metrics.overtakes;
      }
      if (rel < -5.0) npc.pass_armed = true;

      const bool hit = footprints_overlap(ego.pose, ego.half_extents,
                                          npc.pose, npc.half);
      if (hit && !npc.contact) {
        log.events.push_back({t + config.dt, EventKind::Collision, npc.id});
        ++log.metrics.collisions;
      }
      npc.contact = hit;
    }

    for (StopLine& line : stop_lines) {
      const double rel = station_diff(course, ego_station, line.station);
      if (line.crossed_armed && rel > 0.0 && rel < 10.0) {
        line.crossed_armed = false;
        if (spat_feed(t, line.spec->schedule).phase ==
            behavior::SignalPhase::Red) {
          log.events.push_back({t + config.dt, EventKind::RedViolation, -1});
          ++log.metrics.red_violations;
        }
      }
      if (rel < -5.0) line.crossed_armed = true;
    }
  }

  if (course.closed && lap > 0) log.metrics.reached_goal = true;
  if (std::isfinite(min_speed_cruise)) {
    log.metrics.min_speed = min_speed_cruise;
  }
  return log;
}

}  // namespace uak::sim
