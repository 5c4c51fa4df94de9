#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "swarmctl/csv.hpp"
#include "swarmctl/error.hpp"
#include "swarmctl/scenario.hpp"
#include "swarmctl/world.hpp"

namespace swarmctl {

namespace detail {

inline constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                           "#ff7f0e", "#8c564b", "#17becf", "#e377c2"};
inline constexpr int kPaletteSize = 8;

struct Frame {
  double width = 800.0, height = 600.0;
  double margin_left = 60.0, margin_right = 20.0, margin_top = 20.0, margin_bottom = 40.0;
  double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
  bool equal_aspect = false;

  void fit(double xmin, double xmax, double ymin, double ymax) {
    if (xmax <= xmin) xmax = xmin + 1.0;
    if (ymax <= ymin) ymax = ymin + 1.0;
    double pad_x = 0.05 * (xmax - xmin);
    double pad_y = 0.05 * (ymax - ymin);
    x_min = xmin - pad_x;
    x_max = xmax + pad_x;
    y_min = ymin - pad_y;
    y_max = ymax + pad_y;
    if (equal_aspect) {
      double sx = (x_max - x_min) / plot_w();
      double sy = (y_max - y_min) / plot_h();
      double s = std::max(sx, sy);
      double cx = 0.5 * (x_min + x_max), cy = 0.5 * (y_min + y_max);
      x_min = cx - 0.5 * s * plot_w();
      x_max = cx + 0.5 * s * plot_w();
      y_min = cy - 0.5 * s * plot_h();
      y_max = cy + 0.5 * s * plot_h();
    }
  }

  double plot_w() const { return width - margin_left - margin_right; }
  double plot_h() const { return height - margin_top - margin_bottom; }
  double px(double x) const { return margin_left + (x - x_min) / (x_max - x_min) * plot_w(); }
  double py(double y) const { return margin_top + (y_max - y) / (y_max - y_min) * plot_h(); }
};

// rect elements are reserved for histogram bars, so the background comes
// from a style attribute instead.
inline void open_svg(std::ostringstream& out, const Frame& f) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << format_double(f.width)
      << "\" height=\"" << format_double(f.height) << "\" viewBox=\"0 0 "
      << format_double(f.width) << ' ' << format_double(f.height)
      << "\" style=\"background-color:white\">\n";
}

inline void axes(std::ostringstream& out, const Frame& f, const std::string& x_label,
                 const std::string& y_label) {
  double x0 = f.margin_left, y0 = f.height - f.margin_bottom;
  double x1 = f.width - f.margin_right, y1 = f.margin_top;
  out << "<line x1=\"" << format_double(x0) << "\" y1=\"" << format_double(y0) << "\" x2=\""
      << format_double(x1) << "\" y2=\"" << format_double(y0)
      << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
  out << "<line x1=\"" << format_double(x0) << "\" y1=\"" << format_double(y0) << "\" x2=\""
      << format_double(x0) << "\" y2=\"" << format_double(y1)
      << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
  out << "<text x=\"" << format_double(0.5 * (x0 + x1)) << "\" y=\""
      << format_double(f.height - 8.0)
      << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">" << x_label
      << "</text>\n";
  out << "<text x=\"14\" y=\"" << format_double(0.5 * (y0 + y1))
      << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
      << format_double(0.5 * (y0 + y1)) << ")\">" << y_label << "</text>\n";
  out << "<text x=\"" << format_double(x0) << "\" y=\"" << format_double(y0 + 16.0)
      << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">"
      << format_double(f.x_min) << "</text>\n";
  out << "<text x=\"" << format_double(x1) << "\" y=\"" << format_double(y0 + 16.0)
      << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">"
      << format_double(f.x_max) << "</text>\n";
  out << "<text x=\"" << format_double(x0 - 4.0) << "\" y=\"" << format_double(y0)
      << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">"
      << format_double(f.y_min) << "</text>\n";
  out << "<text x=\"" << format_double(x0 - 4.0) << "\" y=\"" << format_double(y1 + 4.0)
      << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">"
      << format_double(f.y_max) << "</text>\n";
}

inline int require_column(const CsvTable& table, const std::string& path, const std::string& name) {
  int col = table.column(name);
  if (col < 0) throw ConfigError(path + ": missing column '" + name + "'");
  return col;
}

}  // namespace detail

// One polyline per agent, colored by group, with optional fixed scenario
// markers (grid points, goal ring) drawn as circles.
inline void plot_trajectory_svg(const CsvTable& table, const std::string& csv_path,
                                const std::string& out_path,
                                const std::optional<ScenarioSpec>& scenario = std::nullopt) {
  if (table.rows.empty()) throw ConfigError(csv_path + ": no data rows");
  int step_col = detail::require_column(table, csv_path, "step");
  int agent_col = detail::require_column(table, csv_path, "agent_id");
  int group_col = detail::require_column(table, csv_path, "group");
  int x_col = detail::require_column(table, csv_path, "x");
  int y_col = detail::require_column(table, csv_path, "y");

  struct Point {
    long step;
    double x, y;
  };
  std::map<long, std::pair<int, std::vector<Point>>> agents;  // id -> (group, points)
  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
  bool first = true;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    long id = std::lround(csv_double(table, csv_path, r, agent_col));
    long step = std::lround(csv_double(table, csv_path, r, step_col));
    int group = static_cast<int>(std::lround(csv_double(table, csv_path, r, group_col)));
    double x = csv_double(table, csv_path, r, x_col);
    double y = csv_double(table, csv_path, r, y_col);
    auto& entry = agents[id];
    entry.first = group;
    entry.second.push_back({step, x, y});
    if (first || x < xmin) xmin = x;
    if (first || x > xmax) xmax = x;
    if (first || y < ymin) ymin = y;
    if (first || y > ymax) ymax = y;
    first = false;
  }

  detail::Frame f;
  f.equal_aspect = true;
  f.fit(xmin, xmax, ymin, ymax);
  std::ostringstream out;
  detail::open_svg(out, f);
  detail::axes(out, f, "x [m]", "y [m]");

  if (scenario) {
    if (scenario->search_grid) {
      SearchGrid grid = make_search_grid(*scenario->search_grid, scenario->map_half_extent);
      for (const Vec2& p : grid.points) {
        out << "<circle cx=\"" << format_double(f.px(p.x)) << "\" cy=\""
            << format_double(f.py(p.y))
            << "\" r=\"3\" fill=\"none\" stroke=\"#999999\" stroke-width=\"1\"/>\n";
      }
    }
    if (scenario->task == Task::collision_avoidance) {
      WorldView ring = init_world(*scenario, 0);
      for (const AgentState& a : ring.agents) {
        if (!a.goal) continue;
        out << "<circle cx=\"" << format_double(f.px(a.goal->x)) << "\" cy=\""
            << format_double(f.py(a.goal->y))
            << "\" r=\"5\" fill=\"none\" stroke=\"#555555\" stroke-width=\"1\" stroke-dasharray=\"2,2\"/>\n";
      }
    }
  }

  for (auto& [id, entry] : agents) {
    auto& pts = entry.second;
    std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a.step < b.step; });
    const char* color = detail::kPalette[entry.first % detail::kPaletteSize];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i) out << ' ';
      out << format_double(f.px(pts[i].x)) << ',' << format_double(f.py(pts[i].y));
    }
    out << "\"/>\n";
  }
  out << "</svg>\n";
  detail::write_file(out_path, out.str());
}

// One rect per bin; an optional marker highlights a cost of interest.
inline void plot_histogram_svg(const CsvTable& table, const std::string& csv_path,
                               const std::string& out_path,
                               std::optional<double> marker = std::nullopt) {
  if (table.rows.empty()) throw ConfigError(csv_path + ": no data rows");
  int lo_col = detail::require_column(table, csv_path, "bin_lo");
  int hi_col = detail::require_column(table, csv_path, "bin_hi");
  int count_col = detail::require_column(table, csv_path, "count");

  std::vector<double> lo(table.rows.size()), hi(table.rows.size()), count(table.rows.size());
  double max_count = 0.0;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    lo[r] = csv_double(table, csv_path, r, lo_col);
    hi[r] = csv_double(table, csv_path, r, hi_col);
    count[r] = csv_double(table, csv_path, r, count_col);
    max_count = std::max(max_count, count[r]);
  }
  if (max_count <= 0.0) max_count = 1.0;

  detail::Frame f;
  f.fit(lo.front(), hi.back(), 0.0, max_count);
  std::ostringstream out;
  detail::open_svg(out, f);
  detail::axes(out, f, "cost", "trials");
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    double x0 = f.px(lo[r]), x1 = f.px(hi[r]);
    double y0 = f.py(count[r]), y1 = f.py(0.0);
    out << "<rect x=\"" << format_double(x0) << "\" y=\"" << format_double(y0) << "\" width=\""
        << format_double(std::max(x1 - x0 - 1.0, 0.5)) << "\" height=\""
        << format_double(std::max(y1 - y0, 0.0))
        << "\" fill=\"#4a90d9\" stroke=\"#2a5a91\" stroke-width=\"0.5\"/>\n";
  }
  if (marker) {
    double mx = f.px(*marker);
    double top = f.margin_top + 8.0;
    out << "<path d=\"M " << format_double(mx) << ' ' << format_double(top + 10.0) << " L "
        << format_double(mx - 6.0) << ' ' << format_double(top) << " L "
        << format_double(mx + 6.0) << ' ' << format_double(top)
        << " Z\" fill=\"#d62728\"/>\n";
    out << "<line x1=\"" << format_double(mx) << "\" y1=\"" << format_double(top + 10.0)
        << "\" x2=\"" << format_double(mx) << "\" y2=\""
        << format_double(f.height - f.margin_bottom)
        << "\" stroke=\"#d62728\" stroke-width=\"1\" stroke-dasharray=\"3,3\"/>\n";
  }
  out << "</svg>\n";
  detail::write_file(out_path, out.str());
}

// Incumbent cost per evaluation as a single polyline; raw per-evaluation
// costs, when present, are drawn as dots.
inline void plot_convergence_svg(const CsvTable& table, const std::string& csv_path,
                                 const std::string& out_path) {
  if (table.rows.empty()) throw ConfigError(csv_path + ": no data rows");
  int idx_col = detail::require_column(table, csv_path, "eval_index");
  int inc_col = detail::require_column(table, csv_path, "incumbent_cost");
  int cost_col = table.column("cost");

  std::vector<double> xs(table.rows.size()), inc(table.rows.size());
  std::vector<double> raw;
  double ymin = 0.0, ymax = 0.0;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    xs[r] = csv_double(table, csv_path, r, idx_col);
    inc[r] = csv_double(table, csv_path, r, inc_col);
    if (r == 0) {
      ymin = ymax = inc[r];
    }
    ymin = std::min(ymin, inc[r]);
    ymax = std::max(ymax, inc[r]);
    if (cost_col >= 0) {
      raw.push_back(csv_double(table, csv_path, r, cost_col));
      ymin = std::min(ymin, raw.back());
      ymax = std::max(ymax, raw.back());
    }
  }

  detail::Frame f;
  f.fit(xs.front(), xs.back(), ymin, ymax);
  std::ostringstream out;
  detail::open_svg(out, f);
  detail::axes(out, f, "evaluation", "cost");
  for (std::size_t r = 0; r < raw.size(); ++r) {
    out << "<circle cx=\"" << format_double(f.px(xs[r])) << "\" cy=\""
        << format_double(f.py(raw[r])) << "\" r=\"2\" fill=\"#bbbbbb\"/>\n";
  }
  out << "<polyline fill=\"none\" stroke=\"#d62728\" stroke-width=\"1.5\" points=\"";
  for (std::size_t r = 0; r < xs.size(); ++r) {
    if (r) out << ' ';
    out << format_double(f.px(xs[r])) << ',' << format_double(f.py(inc[r]));
  }
  out << "\"/>\n";
  out << "</svg>\n";
  detail::write_file(out_path, out.str());
}

}  // namespace swarmctl
