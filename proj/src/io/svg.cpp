#include "uak/io/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace uak::io {
namespace {

constexpr int kWidth = 900;
constexpr int kHeight = 540;
constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 170;  // legend column
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 50;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                    "#ff7f0e", "#9467bd", "#8c564b",
                                    "#17becf", "#7f7f7f"};
constexpr int kPaletteSize = 8;

struct Bounds {
  double min_x = std::numeric_limits<double>::infinity();
  double max_x = -std::numeric_limits<double>::infinity();
  double min_y = std::numeric_limits<double>::infinity();
  double max_y = -std::numeric_limits<double>::infinity();

  void include(const geom::Vec2& p) {
    min_x = std::min(min_x, p.x());
    max_x = std::max(max_x, p.x());
    min_y = std::min(min_y, p.y());
    max_y = std::max(max_y, p.y());
  }
  bool valid() const { return min_x <= max_x && min_y <= max_y; }
  void pad() {
    const double dx = max_x - min_x;
    const double dy = max_y - min_y;
    const double px = dx > 0.0 ? 0.04 * dx : 1.0;
    const double py = dy > 0.0 ? 0.04 * dy : 1.0;
    min_x -= px;
    max_x += px;
    min_y -= py;
    max_y += py;
  }
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string escape(const std::string& text) {
  std::string out;
  for (const char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

std::ofstream open_svg(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SvgError("cannot open for writing: " + path.string());
  return out;
}

void write_header(std::ofstream& out, const std::string& title) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
      << kHeight << "\">\n";
  out << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">"
      << escape(title) << "</text>\n";
}

void write_legend(std::ofstream& out, std::span<const SvgSeries> series) {
  const int x = kWidth - kMarginRight + 16;
  int y = kMarginTop + 12;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = kPalette[i % kPaletteSize];
    out << "<line x1=\"" << x << "\" y1=\"" << y << "\" x2=\"" << x + 24
        << "\" y2=\"" << y << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << x + 30 << "\" y=\"" << y + 4
        << "\" font-family=\"sans-serif\" font-size=\"12\">"
        << escape(series[i].label) << "</text>\n";
    y += 18;
  }
}

void write_polyline(std::ofstream& out, const std::vector<geom::Vec2>& pts,
                    const std::string& stroke, double width) {
  if (pts.size() < 2) {
    if (pts.size() == 1) {
      out << "<circle cx=\"" << px(pts[0].x()) << "\" cy=\"" << px(pts[0].y())
          << "\" r=\"2.5\" fill=\"" << stroke << "\"/>\n";
    }
    return;
  }
  out << "<polyline fill=\"none\" stroke=\"" << stroke
      << "\" stroke-width=\"" << num(width) << "\" points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i > 0) out << ' ';
    out << px(pts[i].x()) << ',' << px(pts[i].y());
  }
  out << "\"/>\n";
}

}  // namespace

void write_line_chart(const std::filesystem::path& path,
                      const std::string& title, const std::string& x_label,
                      const std::string& y_label,
                      std::span<const SvgSeries> series) {
  Bounds bounds;
  for (const auto& s : series) {
    for (const auto& p : s.points) bounds.include(p);
  }
  if (!bounds.valid()) {
    throw SvgError("line chart '" + title + "': no drawable points");
  }
  bounds.pad();

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  const auto map = [&](const geom::Vec2& p) -> geom::Vec2 {
    const double u = (p.x() - bounds.min_x) / (bounds.max_x - bounds.min_x);
    const double v = (p.y() - bounds.min_y) / (bounds.max_y - bounds.min_y);
    return {kMarginLeft + u * plot_w, kMarginTop + (1.0 - v) * plot_h};
  };

  auto out = open_svg(path);
  write_header(out, title);

  // Frame, grid and tick labels.
  out << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop
      << "\" width=\"" << num(plot_w) << "\" height=\"" << num(plot_h)
      << "\" fill=\"none\" stroke=\"#333333\"/>\n";
  constexpr int kTicks = 5;
  for (int i = 0; i <= kTicks; ++i) {
    const double fx = bounds.min_x + (bounds.max_x - bounds.min_x) * i / kTicks;
    const double fy = bounds.min_y + (bounds.max_y - bounds.min_y) * i / kTicks;
    const double gx = kMarginLeft + plot_w * i / kTicks;
    const double gy = kMarginTop + plot_h - plot_h * i / kTicks;
    if (i > 0 && i < kTicks) {
      out << "<line x1=\"" << px(gx) << "\" y1=\"" << kMarginTop << "\" x2=\""
          << px(gx) << "\" y2=\"" << num(kMarginTop + plot_h)
          << "\" stroke=\"#dddddd\"/>\n";
      out << "<line x1=\"" << kMarginLeft << "\" y1=\"" << px(gy)
          << "\" x2=\"" << num(kMarginLeft + plot_w) << "\" y2=\"" << px(gy)
          << "\" stroke=\"#dddddd\"/>\n";
    }
    out << "<text x=\"" << px(gx) << "\" y=\"" << num(kMarginTop + plot_h + 18)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << num(fx) << "</text>\n";
    out << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << px(gy + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << num(fy) << "</text>\n";
  }
  out << "<text x=\"" << num(kMarginLeft + plot_w / 2) << "\" y=\""
      << kHeight - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\">"
      << escape(x_label) << "</text>\n";
  out << "<text x=\"18\" y=\"" << num(kMarginTop + plot_h / 2)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\" transform=\"rotate(-90 18 "
      << num(kMarginTop + plot_h / 2) << ")\">" << escape(y_label)
      << "</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    std::vector<geom::Vec2> pixels;
    pixels.reserve(series[i].points.size());
    for (const auto& p : series[i].points) pixels.push_back(map(p));
    write_polyline(out, pixels, kPalette[i % kPaletteSize], 1.6);
  }
  write_legend(out, series);
  out << "</svg>\n";
}

void write_plan_view(const std::filesystem::path& path,
                     const std::string& title,
                     std::span<const std::vector<geom::Vec2>> outlines,
                     std::span<const SvgSeries> series) {
  Bounds bounds;
  for (const auto& o : outlines) {
    for (const auto& p : o) bounds.include(p);
  }
  for (const auto& s : series) {
    for (const auto& p : s.points) bounds.include(p);
  }
  if (!bounds.valid()) {
    throw SvgError("plan view '" + title + "': no drawable points");
  }
  bounds.pad();

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  // Equal aspect so geometry is not distorted.
  const double scale = std::min(plot_w / (bounds.max_x - bounds.min_x),
                                plot_h / (bounds.max_y - bounds.min_y));
  const double cx = 0.5 * (bounds.min_x + bounds.max_x);
  const double cy = 0.5 * (bounds.min_y + bounds.max_y);
  const auto map = [&](const geom::Vec2& p) -> geom::Vec2 {
    return {kMarginLeft + plot_w / 2 + (p.x() - cx) * scale,
            kMarginTop + plot_h / 2 - (p.y() - cy) * scale};
  };

  auto out = open_svg(path);
  write_header(out, title);
  for (const auto& o : outlines) {
    std::vector<geom::Vec2> pixels;
    pixels.reserve(o.size());
    for (const auto& p : o) pixels.push_back(map(p));
    write_polyline(out, pixels, "#bbbbbb", 4.0);
  }
  for (std::size_t i = 0; i < series.size(); ++i) {
    std::vector<geom::Vec2> pixels;
    pixels.reserve(series[i].points.size());
    for (const auto& p : series[i].points) pixels.push_back(map(p));
    write_polyline(out, pixels, kPalette[i % kPaletteSize], 1.6);
  }
  write_legend(out, series);
  out << "</svg>\n";
}

}  // namespace uak::io
