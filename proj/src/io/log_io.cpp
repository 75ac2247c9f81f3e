#include "uak/io/log_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "json.hpp"
#include "uak/behavior/tsps.hpp"
#include "uak/geom/polyline.hpp"
#include "uak/loc/localizer.hpp"

namespace uak::io {
namespace {

using nlohmann::json;

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary);  // no platform newline mangling
  if (!out) throw LogFormatError("cannot open for writing: " + path.string());
  return out;
}

void dump_json(const json& doc, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << doc.dump(2) << '\n';
}

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

json json_number(double value) {
  return std::isfinite(value) ? json(value) : json(nullptr);
}

}  // namespace

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return buf;
}

void write_sim_log_csv(const sim::SimLog& log, const std::string& team,
                       const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "team,t,x,y,theta,speed,steer,decision,v_ref,station,lap,stuck\n";
  for (const auto& r : log.records) {
    out << team << ',' << format_number(r.t) << ',' << format_number(r.ego.x)
        << ',' << format_number(r.ego.y) << ',' << format_number(r.ego.theta)
        << ',' << format_number(r.speed) << ',' << format_number(r.steer)
        << ',' << behavior::path_choice_name(r.decision) << ','
        << format_number(r.v_ref) << ',' << format_number(r.station) << ','
        << r.lap << ',' << r.stuck << '\n';
  }
}

void write_agents_csv(const sim::SimLog& log,
                      const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "id,t,x,y,theta,speed\n";
  for (const auto& r : log.records) {
    for (const auto& a : r.agents) {
      out << a.id << ',' << format_number(r.t) << ','
          << format_number(a.pose.x) << ',' << format_number(a.pose.y) << ','
          << format_number(a.pose.theta) << ',' << format_number(a.speed)
          << '\n';
    }
  }
}

void write_events_json(const sim::SimLog& log,
                       const std::filesystem::path& path) {
  json events = json::array();
  for (const auto& e : log.events) {
    events.push_back({{"t", e.t},
                      {"kind", sim::event_kind_name(e.kind)},
                      {"agent", e.agent_id}});
  }
  dump_json(events, path);
}

void write_metrics_json(const sim::SimMetrics& metrics,
                        const std::filesystem::path& path) {
  json doc{{"progress", metrics.progress},
           {"min_clearance", json_number(metrics.min_clearance)},
           {"min_speed", metrics.min_speed},
           {"lap_times", metrics.lap_times},
           {"laps", metrics.lap_times.size()},
           {"overtakes", metrics.overtakes},
           {"collisions", metrics.collisions},
           {"red_violations", metrics.red_violations},
           {"reached_goal", metrics.reached_goal}};
  dump_json(doc, path);
}

void write_replay_csv(const sim::ReplayLog& log,
                      const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "t,truth_x,truth_y,truth_theta,fused_x,fused_y,fused_theta,"
         "odom_x,odom_y,odom_theta,mode,fitness,failed,forced\n";
  for (const auto& s : log.steps) {
    out << format_number(s.t) << ',' << format_number(s.truth.x) << ','
        << format_number(s.truth.y) << ',' << format_number(s.truth.theta)
        << ',' << format_number(s.fused.x) << ',' << format_number(s.fused.y)
        << ',' << format_number(s.fused.theta) << ','
        << format_number(s.odom_only.x) << ',' << format_number(s.odom_only.y)
        << ',' << format_number(s.odom_only.theta) << ','
        << loc::mode_name(s.mode) << ',' << format_number(s.fitness) << ','
        << (s.failed ? 1 : 0) << ',' << (s.forced ? 1 : 0) << '\n';
  }
}

void write_replay_summary_json(const sim::ReplaySummary& summary,
                               const std::filesystem::path& path) {
  json doc{{"fused_rms", summary.fused_rms},
           {"fused_max", summary.fused_max},
           {"odom_rms", summary.odom_rms},
           {"odom_max", summary.odom_max},
           {"steps", summary.steps},
           {"failures", summary.failures},
           {"forced_failures", summary.forced_failures}};
  dump_json(doc, path);
}

void write_route_json(const road::Route& route, const std::string& start,
                      const std::string& goal,
                      const std::filesystem::path& path) {
  json doc{{"start", start},
           {"goal", goal},
           {"links", route.link_ids},
           {"length", geom::polyline_length(route.polyline)},
           {"cost", route.total_cost}};
  dump_json(doc, path);
}

void write_route_csv(const road::Route& route,
                     const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "s,x,y\n";
  double s = 0.0;
  for (std::size_t i = 0; i < route.polyline.size(); ++i) {
    if (i > 0) s += (route.polyline[i] - route.polyline[i - 1]).norm();
    out << format_number(s) << ',' << format_number(route.polyline[i].x())
        << ',' << format_number(route.polyline[i].y()) << '\n';
  }
}

traffic::TrajectorySet read_trajectory_csv(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LogFormatError("cannot open log: " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.empty()) {
    throw LogFormatError(path.string() + " row 1: missing header");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_csv_row(line);
  int team_col = -1, t_col = -1, x_col = -1, y_col = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "team") team_col = static_cast<int>(i);
    if (header[i] == "t") t_col = static_cast<int>(i);
    if (header[i] == "x") x_col = static_cast<int>(i);
    if (header[i] == "y") y_col = static_cast<int>(i);
  }
  if (t_col < 0 || x_col < 0 || y_col < 0) {
    throw LogFormatError(path.string() +
                         " row 1: header must name columns t, x and y");
  }

  traffic::TrajectorySet set;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv_row(line);
    const int max_col = std::max({team_col, t_col, x_col, y_col});
    if (static_cast<int>(fields.size()) <= max_col) {
      throw LogFormatError(path.string() + " row " + std::to_string(row) +
                           ": expected at least " +
                           std::to_string(max_col + 1) + " fields, got " +
                           std::to_string(fields.size()));
    }
    const auto parse = [&](int col, const char* name) {
      char* end = nullptr;
      const std::string& text = fields[col];
      const double v = std::strtod(text.c_str(), &end);
      if (end == text.c_str() || *end != '\0') {
        throw LogFormatError(path.string() + " row " + std::to_string(row) +
                             ": field '" + name + "' is not numeric: '" +
                             text + "'");
      }
      return v;
    };
    traffic::TrajectoryPoint p;
    p.t = parse(t_col, "t");
    p.x = parse(x_col, "x");
    p.y = parse(y_col, "y");
    set.points.push_back(p);
    if (team_col >= 0 && set.team.empty()) set.team = fields[team_col];
  }
  return set;
}

void write_report_json(const traffic::SimilarityReport& report,
                       const std::filesystem::path& path) {
  json sections = json::array();
  for (const auto& section : report.sections) {
    json pairs = json::array();
    for (const auto& cell : section.pairs) {
      pairs.push_back(
          {{"a", report.teams[cell.a]},
           {"b", report.teams[cell.b]},
           {"n", cell.n},
           {"m", cell.m},
           {"kld", cell.kld_valid ? json(cell.kld) : json(nullptr)},
           {"mean_error",
            cell.error_valid ? json(cell.mean_error) : json(nullptr)},
           {"rms_error",
            cell.error_valid ? json(cell.rms_error) : json(nullptr)}});
    }
    sections.push_back({{"section", section.section}, {"pairs", pairs}});
  }
  dump_json({{"teams", report.teams}, {"sections", sections}}, path);
}

void write_report_text(const traffic::SimilarityReport& report,
                       const std::filesystem::path& path) {
  auto out = open_out(path);
  const auto cell_text = [](const traffic::PairCell& cell) {
    char buf[64];
    if (cell.kld_valid) {
      std::snprintf(buf, sizeof(buf), "%.3f / %.3f", cell.kld,
                    cell.error_valid ? cell.mean_error : 0.0);
    } else if (cell.error_valid) {
      std::snprintf(buf, sizeof(buf), "- / %.3f", cell.mean_error);
    } else {
      std::snprintf(buf, sizeof(buf), "- / -");
    }
    return std::string(buf);
  };

  std::size_t width = 12;
  for (const auto& team : report.teams) width = std::max(width, team.size());
  for (const auto& section : report.sections) {
    for (const auto& cell : section.pairs) {
      width = std::max(width, cell_text(cell).size());
    }
  }
  const auto pad = [&](const std::string& text) {
    std::string s = text;
    s.resize(width + 2, ' ');
    return s;
  };

  out << "cells: KLD [nats] / mean NN error [m]; '-': too few samples\n";
  for (const auto& section : report.sections) {
    out << "\n== " << section.section << " ==\n";
    out << pad("");
    for (std::size_t j = 1; j < report.teams.size(); ++j) {
      out << pad(report.teams[j]);
    }
    out << '\n';
    for (std::size_t i = 0; i + 1 < report.teams.size(); ++i) {
      out << pad(report.teams[i]);
      for (std::size_t j = 1; j < report.teams.size(); ++j) {
        if (j <= i) {
          out << pad("");
          continue;
        }
        const auto it = std::find_if(
            section.pairs.begin(), section.pairs.end(), [&](const auto& c) {
              return c.a == static_cast<int>(i) && c.b == static_cast<int>(j);
            });
        out << pad(it != section.pairs.end() ? cell_text(*it) : "");
      }
      out << '\n';
    }
  }
}

}  // namespace uak::io
