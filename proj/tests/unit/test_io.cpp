#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "uak/io/log_io.hpp"
#include "uak/io/svg.hpp"

using namespace uak;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / name;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

sim::SimLog tiny_log() {
  sim::SimLog log;
  for (int i = 0; i < 3; ++i) {
    sim::StepRecord r;
    r.t = 0.1 * i;
    r.ego = {1.0 * i, 0.5 * i, 0.01 * i};
    r.speed = 2.0 + i;
    r.steer = 0.002 * i;
    r.decision = behavior::PathChoice::GlobalRoute;
    r.v_ref = 8.0;
    r.station = 1.0 * i;
    r.lap = 0;
    r.agents.push_back({7, {10.0 + i, 0.0, 0.0}, 3.0});
    log.records.push_back(r);
  }
  log.events.push_back({0.2, sim::EventKind::Overtake, 7});
  log.metrics.progress = 2.0;
  log.metrics.min_speed = 2.0;
  log.metrics.overtakes = 1;
  log.metrics.reached_goal = true;
  return log;
}

}  // namespace

TEST_CASE("number formatting is stable and faithful") {
  CHECK(io::format_number(0.0) == "0");
  CHECK(io::format_number(1.5) == "1.5");
  CHECK(io::format_number(-3.25) == "-3.25");
  CHECK(io::format_number(1.0 / 3.0) == io::format_number(1.0 / 3.0));
  CHECK(io::format_number(123456789.0) == "123456789");
}

TEST_CASE("sim log CSV writes and reads back as a trajectory") {
  const auto path = temp_file("uak_io_log.csv");
  const auto log = tiny_log();
  io::write_sim_log_csv(log, "alpha", path);

  const auto first = slurp(path);
  CHECK(first.substr(0, 4) == "team");
  io::write_sim_log_csv(log, "alpha", path);
  CHECK(slurp(path) == first);  // byte-identical rewrite

  const auto set = io::read_trajectory_csv(path);
  CHECK(set.team == "alpha");
  REQUIRE(set.points.size() == 3);
  CHECK(set.points[1].t == 0.1);
  CHECK(set.points[2].x == 2.0);
  CHECK(set.points[2].y == 1.0);
  fs::remove(path);
}

TEST_CASE("agents CSV carries one row per agent per step") {
  const auto path = temp_file("uak_io_agents.csv");
  io::write_agents_csv(tiny_log(), path);
  const auto text = slurp(path);
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);  // header + 3
  CHECK(text.find("7,0.1,11,") != std::string::npos);
  fs::remove(path);
}

TEST_CASE("trajectory reader names the offending row") {
  const auto path = temp_file("uak_io_bad.csv");
  {
    std::ofstream out(path);
    out << "team,t,x,y\nalpha,0.0,1.0,2.0\nalpha,0.1,oops,2.0\n";
  }
  CHECK_THROWS_WITH_AS(io::read_trajectory_csv(path),
                       doctest::Contains("row 3"), io::LogFormatError);
  {
    std::ofstream out(path);
    out << "team,t,x,y\nalpha,0.0\n";
  }
  CHECK_THROWS_WITH_AS(io::read_trajectory_csv(path),
                       doctest::Contains("row 2"), io::LogFormatError);
  {
    std::ofstream out(path);
    out << "a,b,c\n1,2,3\n";
  }
  CHECK_THROWS_WITH_AS(io::read_trajectory_csv(path),
                       doctest::Contains("row 1"), io::LogFormatError);
  fs::remove(path);
}

TEST_CASE("events and metrics serialize to parseable JSON") {
  const auto events_path = temp_file("uak_io_events.json");
  const auto metrics_path = temp_file("uak_io_metrics.json");
  const auto log = tiny_log();
  io::write_events_json(log, events_path);
  io::write_metrics_json(log.metrics, metrics_path);

  const auto events = nlohmann::json::parse(slurp(events_path));
  REQUIRE(events.size() == 1);
  CHECK(events[0]["kind"] == "overtake");
  CHECK(events[0]["agent"] == 7);

  const auto metrics = nlohmann::json::parse(slurp(metrics_path));
  CHECK(metrics["overtakes"] == 1);
  CHECK(metrics["reached_goal"] == true);
  // Untouched clearance stays +inf, which JSON renders as null.
  CHECK(metrics["min_clearance"].is_null());
  fs::remove(events_path);
  fs::remove(metrics_path);
}

TEST_CASE("replay CSV covers every step with mode names") {
  sim::ReplayLog log;
  sim::ReplayStep step;
  step.t = 0.1;
  step.truth = {1.0, 2.0, 0.1};
  step.fused = {1.01, 2.0, 0.1};
  step.odom_only = {1.02, 2.0, 0.1};
  step.mode = loc::Mode::LaneFollow;
  step.failed = true;
  step.forced = true;
  log.steps.push_back(step);
  const auto path = temp_file("uak_io_replay.csv");
  io::write_replay_csv(log, path);
  const auto text = slurp(path);
  CHECK(text.find("lane_follow") != std::string::npos);
  CHECK(text.find(",1,1\n") != std::string::npos);  // failed, forced flags
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);
  fs::remove(path);

  const auto summary_path = temp_file("uak_io_replay_summary.json");
  sim::ReplaySummary summary;
  summary.fused_rms = 0.01;
  summary.steps = 1;
  io::write_replay_summary_json(summary, summary_path);
  const auto doc = nlohmann::json::parse(slurp(summary_path));
  CHECK(doc["fused_rms"] == 0.01);
  fs::remove(summary_path);
}

TEST_CASE("route artifacts list links and accumulate stations") {
  road::Route route;
  route.link_ids = {"l0", "l1"};
  route.polyline = {{0.0, 0.0}, {3.0, 4.0}, {3.0, 14.0}};
  route.total_cost = 15.0;
  const auto json_path = temp_file("uak_io_route.json");
  const auto csv_path = temp_file("uak_io_route.csv");
  io::write_route_json(route, "a", "b", json_path);
  io::write_route_csv(route, csv_path);

  const auto doc = nlohmann::json::parse(slurp(json_path));
  CHECK(doc["links"] == nlohmann::json({"l0", "l1"}));
  CHECK(doc["length"] == 15.0);
  CHECK(doc["start"] == "a");

  const auto text = slurp(csv_path);
  CHECK(text.find("s,x,y\n0,0,0\n5,3,4\n15,3,14\n") != std::string::npos);
  fs::remove(json_path);
  fs::remove(csv_path);
}

TEST_CASE("similarity report renders JSON and a text matrix") {
  std::vector<traffic::TrajectorySet> teams;
  for (int t = 0; t < 3; ++t) {
    traffic::TrajectorySet set{"team" + std::to_string(t), {}};
    for (int i = 0; i < 60; ++i) {
      set.points.push_back({0.1 * i, 1.0 * i, t == 2 ? 2.0 : 0.0});
    }
    teams.push_back(set);
  }
  const auto report = traffic::pairwise_report(teams, {}, 1, 50);

  const auto json_path = temp_file("uak_io_report.json");
  const auto text_path = temp_file("uak_io_report.txt");
  io::write_report_json(report, json_path);
  io::write_report_text(report, text_path);

  const auto doc = nlohmann::json::parse(slurp(json_path));
  CHECK(doc["teams"].size() == 3);
  REQUIRE(doc["sections"].size() == 1);
  CHECK(doc["sections"][0]["pairs"].size() == 3);
  CHECK(doc["sections"][0]["pairs"][0]["a"] == "team0");

  const auto text = slurp(text_path);
  CHECK(text.find("== full ==") != std::string::npos);
  CHECK(text.find("team2") != std::string::npos);
  fs::remove(json_path);
  fs::remove(text_path);

  // A sliver section with no points renders the fallback dash.
  const std::vector<traffic::SectionSpec> sections{
      {"nowhere",
       traffic::SectionKind::Straight,
       {{1000.0, 1000.0}, {1001.0, 1000.0}, {1001.0, 1001.0}}}};
  const auto flagged = traffic::pairwise_report(teams, sections, 1, 50);
  io::write_report_text(flagged, text_path);
  CHECK(slurp(text_path).find("- / -") != std::string::npos);
  fs::remove(text_path);
}

TEST_CASE("SVG charts embed one polyline per series") {
  std::vector<io::SvgSeries> series(2);
  series[0].label = "tau=0";
  series[1].label = "tau=1";
  for (int i = 0; i <= 10; ++i) {
    series[0].points.push_back({1.0 * i, 0.5 * i});
    series[1].points.push_back({1.0 * i, 1.0 * i});
  }
  const auto path = temp_file("uak_io_chart.svg");
  io::write_line_chart(path, "progress", "t [s]", "s [m]", series);
  const auto text = slurp(path);
  CHECK(text.substr(0, 4) == "<svg");
  CHECK(std::count_if(series.begin(), series.end(), [](const auto&) {
          return true;
        }) == 2);
  std::size_t polylines = 0;
  for (std::size_t pos = text.find("<polyline"); pos != std::string::npos;
       pos = text.find("<polyline", pos + 1)) {
    ++polylines;
  }
  CHECK(polylines == 2);
  CHECK(text.find("tau=0") != std::string::npos);
  CHECK(text.find("#1f77b4") != std::string::npos);

  io::write_line_chart(path, "progress", "t [s]", "s [m]", series);
  CHECK(slurp(path) == text);  // deterministic rewrite
  fs::remove(path);

  CHECK_THROWS_AS(io::write_line_chart(path, "empty", "x", "y",
                                       std::vector<io::SvgSeries>{}),
                  io::SvgError);

  const std::vector<std::vector<geom::Vec2>> outlines{
      {{0.0, 0.0}, {10.0, 0.0}}};
  const auto map_path = temp_file("uak_io_map.svg");
  io::write_plan_view(map_path, "course", outlines, series);
  const auto map_text = slurp(map_path);
  CHECK(map_text.find("#bbbbbb") != std::string::npos);
  fs::remove(map_path);
}
