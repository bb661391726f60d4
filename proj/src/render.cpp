#include "otnav/render.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace otnav {

namespace {

std::string num(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", value);
  std::string s = buf;
  if (s == "-0.00") s = "0.00";
  return s;
}

class Canvas {
 public:
  Canvas(const GridWorld& grid, const RenderOptions& options)
      : grid_(grid), scale_(options.pixels_per_unit), lo_(grid.lower_corner()), hi_(grid.upper_corner()) {
    const double w = (hi_.x() - lo_.x()) * scale_;
    const double h = (hi_.y() - lo_.y()) * scale_;
    out_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(w) << "\" height=\"" << num(h)
         << "\" viewBox=\"0 0 " << num(w) << ' ' << num(h) << "\">\n";
  }

  // World y points up, SVG y points down.
  double x(double wx) const { return (wx - lo_.x()) * scale_; }
  double y(double wy) const { return (hi_.y() - wy) * scale_; }

  void cells(const GridWorld& world) {
    const double side = world.cell_size() * scale_;
    for (CellId c = 0; c < world.cell_count(); ++c) {
      const Vec2 center = world.cell_center(c);
      const double half = world.cell_size() / 2.0;
      out_ << "<rect class=\"cell\" x=\"" << num(x(center.x() - half)) << "\" y=\"" << num(y(center.y() + half))
           << "\" width=\"" << num(side) << "\" height=\"" << num(side) << "\" fill=\""
           << (world.is_obstacle(c) ? "#8c8c8c" : "#ffffff") << "\" stroke=\"#d0d0d0\" stroke-width=\"0.5\"/>\n";
    }
  }

  void robot(const Vec2& p, double heading) {
    const double r = 0.3 * grid_.cell_size();
    out_ << "<polygon class=\"robot\" points=\"";
    for (int i = 0; i < 3; ++i) {
      const double a = heading + i * 2.0 * 3.14159265358979323846 / 3.0;
      const double scale = i == 0 ? 1.0 : 0.7;
      if (i > 0) out_ << ' ';
      out_ << num(x(p.x() + scale * r * std::cos(a))) << ',' << num(y(p.y() + scale * r * std::sin(a)));
    }
    out_ << "\" fill=\"#1f5fbf\"/>\n";
  }

  void target(const Vec2& p) {
    out_ << "<circle class=\"target\" cx=\"" << num(x(p.x())) << "\" cy=\"" << num(y(p.y())) << "\" r=\""
         << num(0.25 * grid_.cell_size() * scale_) << "\" fill=\"none\" stroke=\"#c62828\" stroke-width=\"2\"/>\n";
  }

  void polyline(const std::string& cls, const std::vector<Vec2>& points, const std::string& color, double width) {
    out_ << "<polyline class=\"" << cls << "\" points=\"";
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (i > 0) out_ << ' ';
      out_ << num(x(points[i].x())) << ',' << num(y(points[i].y()));
    }
    out_ << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << num(width) << "\"/>\n";
  }

  std::string finish() {
    out_ << "</svg>\n";
    return out_.str();
  }

 private:
  const GridWorld& grid_;
  double scale_;
  Vec2 lo_, hi_;
  std::ostringstream out_;
};

void markers(Canvas& canvas, const ScenarioSpec& scenario, const std::vector<double>& headings) {
  for (std::size_t m = 0; m < scenario.targets.size(); ++m) canvas.target(scenario.grid.cell_center(scenario.targets[m]));
  for (std::size_t n = 0; n < scenario.robots.size(); ++n) {
    canvas.robot(scenario.grid.cell_center(scenario.robots[n]), n < headings.size() ? headings[n] : 0.0);
  }
}

}  // namespace

std::string render_svg(const ScenarioSpec& scenario, const PathSystem& paths, const RenderOptions& options) {
  Canvas canvas(scenario.grid, options);
  canvas.cells(scenario.grid);
  std::vector<double> headings(scenario.robots.size(), 0.0);
  for (const Chain& chain : paths.chains) {
    std::vector<Vec2> points;
    for (CellId c : chain.cells) points.push_back(scenario.grid.cell_center(c));
    canvas.polyline("path", points, "#2e7d32", 2.0);
    if (points.size() >= 2 && chain.robot >= 0 && chain.robot < static_cast<int>(headings.size())) {
      const Vec2 d = points[1] - points[0];
      headings[chain.robot] = std::atan2(d.y(), d.x());
    }
  }
  markers(canvas, scenario, headings);
  return canvas.finish();
}

std::string render_svg(const ScenarioSpec& scenario, const SimulationLog& log, const RenderOptions& options) {
  const GridWorld& world = log.final_grid.cell_count() > 0 ? log.final_grid : scenario.grid;
  Canvas canvas(world, options);
  canvas.cells(world);
  const std::size_t n_robots = scenario.robots.size();
  std::vector<std::vector<Vec2>> reference(n_robots), tracked(n_robots);
  std::vector<double> headings(n_robots, 0.0);
  std::vector<bool> seen(n_robots, false);
  for (const LogRow& row : log.rows) {
    if (row.robot < 0 || static_cast<std::size_t>(row.robot) >= n_robots) continue;
    reference[row.robot].push_back(row.reference);
    tracked[row.robot].push_back(row.state.position());
    if (!seen[row.robot]) headings[row.robot] = row.state.theta;
    seen[row.robot] = true;
  }
  for (std::size_t n = 0; n < n_robots; ++n) {
    if (log.final_states.size() > n) tracked[n].push_back(log.final_states[n].position());
    const bool assigned = n >= log.assigned_target.size() || log.assigned_target[n] >= 0;
    if (assigned) canvas.polyline("reference", reference[n], "#f28e2b", 2.0);
    canvas.polyline("tracked", tracked[n], "#2ca02c", 1.2);
  }
  markers(canvas, scenario, headings);
  return canvas.finish();
}

}  // namespace otnav
