#pragma once

#include <filesystem>
#include <string>

#include "uak/road/route.hpp"
#include "uak/sim/replay.hpp"
#include "uak/sim/scenario.hpp"
#include "uak/traffic/analysis.hpp"

namespace uak::io {

UAK_DEFINE_ERROR(LogFormatError);

// Shortest-faithful decimal rendering of a double ("%.9g"): identical
// values always produce identical bytes, keeping rewritten files
// byte-comparable.
std::string format_number(double value);

// Ego pose/decision trace, one row per step:
// team,t,x,y,theta,speed,steer,decision,v_ref,station,lap,stuck
void write_sim_log_csv(const sim::SimLog& log, const std::string& team,
                       const std::filesystem::path& path);

// Scripted-vehicle trace, one row per (step, agent): id,t,x,y,theta,speed
void write_agents_csv(const sim::SimLog& log,
                      const std::filesystem::path& path);

// [{"t": ..., "kind": "overtake" | "collision" | "red_violation",
//   "agent": id}], time-ordered.
void write_events_json(const sim::SimLog& log,
                       const std::filesystem::path& path);

void write_metrics_json(const sim::SimMetrics& metrics,
                        const std::filesystem::path& path);

// Localization replay trace, one row per step:
// t,truth_x,truth_y,truth_theta,fused_x,fused_y,fused_theta,
// odom_x,odom_y,odom_theta,mode,fitness,failed,forced
void write_replay_csv(const sim::ReplayLog& log,
                      const std::filesystem::path& path);

void write_replay_summary_json(const sim::ReplaySummary& summary,
                               const std::filesystem::path& path);

// {"start": ..., "goal": ..., "links": [...], "length": ..., "cost": ...}
void write_route_json(const road::Route& route, const std::string& start,
                      const std::string& goal,
                      const std::filesystem::path& path);

// Route centerline, one row per vertex: s,x,y
void write_route_csv(const road::Route& route,
                     const std::filesystem::path& path);

// Reads a trajectory CSV whose header names at least t, x and y (the sim
// log format qualifies). The team column is optional; when absent the
// returned set's team is empty and callers label it themselves. Throws
// LogFormatError naming the 1-based row on any malformed line.
traffic::TrajectorySet read_trajectory_csv(const std::filesystem::path& path);

// Machine-readable report: teams plus per-section pair lists; a flagged
// KLD serializes as null.
void write_report_json(const traffic::SimilarityReport& report,
                       const std::filesystem::path& path);

// Human-readable upper-triangular matrix per section, each cell
// "kld / mean"; a flagged KLD renders as "-".
void write_report_text(const traffic::SimilarityReport& report,
                       const std::filesystem::path& path);

}  // namespace uak::io
