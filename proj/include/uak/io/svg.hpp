#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "uak/error.hpp"
#include "uak/geom/pose2.hpp"

namespace uak::io {

UAK_DEFINE_ERROR(SvgError);

struct SvgSeries {
  std::string label;
  std::vector<geom::Vec2> points;
};

// Self-contained line chart: axes, ticks, grid, legend, one polyline per
// series in a fixed palette. Deterministic: identical input gives
// identical bytes. Throws SvgError when nothing is drawable.
void write_line_chart(const std::filesystem::path& path,
                      const std::string& title, const std::string& x_label,
                      const std::string& y_label,
                      std::span<const SvgSeries> series);

// Equal-aspect planar view: grey outline polylines (e.g. road-graph link
// centerlines) under colored trajectory series.
void write_plan_view(const std::filesystem::path& path,
                     const std::string& title,
                     std::span<const std::vector<geom::Vec2>> outlines,
                     std::span<const SvgSeries> series);

}  // namespace uak::io
