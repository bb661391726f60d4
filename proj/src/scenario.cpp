#include "otnav/scenario.hpp"

#include <string>

#include "otnav/errors.hpp"

namespace otnav {
namespace {

CellId cell_of(const ScenarioDescription& d, const RowCol& rc, const char* what) {
  if (rc.row < 0 || rc.row >= d.rows || rc.col < 0 || rc.col >= d.cols) {
    throw RangeError(std::string(what) + " at (" + std::to_string(rc.row) + ", " +
                     std::to_string(rc.col) + ") lies outside the grid");
  }
  return static_cast<CellId>(rc.row) * d.cols + rc.col;
}

}  // namespace

ScenarioSpec build_scenario(const ScenarioDescription& d) {
  if (d.rows < 1 || d.cols < 1) throw RangeError("rows and cols must be >= 1");

  std::vector<CellId> obstacles;
  for (const RowCol& rc : d.obstacles) obstacles.push_back(cell_of(d, rc, "obstacle"));
  for (const CellRect& rect : d.obstacle_rects) {
    if (rect.r0 > rect.r1 || rect.c0 > rect.c1) throw RangeError("obstacle rect has r0 > r1 or c0 > c1");
    for (int r = rect.r0; r <= rect.r1; ++r) {
      for (int c = rect.c0; c <= rect.c1; ++c) obstacles.push_back(cell_of(d, {r, c}, "obstacle rect"));
    }
  }

  const Vec2 origin = d.origin.value_or(Vec2::Constant(0.5 * d.cell_size));
  ScenarioSpec spec{GridWorld(d.rows, d.cols, d.cell_size, origin, obstacles, d.connectivity),
                    {}, {}, d.cost, d.mpc, d.seed};
  for (const RowCol& rc : d.robots) spec.robots.push_back(cell_of(d, rc, "robot"));
  for (const RowCol& rc : d.targets) spec.targets.push_back(cell_of(d, rc, "target"));
  validate_scenario(spec);
  return spec;
}

GridWorld build_grid(const ScenarioDescription& description) { return build_scenario(description).grid; }

void validate_scenario(const ScenarioSpec& s, bool allow_empty) {
  if (!allow_empty && (s.robots.empty() || s.targets.empty())) {
    throw RangeError("scenario needs at least one robot and one target");
  }
  std::vector<char> used(static_cast<std::size_t>(s.grid.cell_count()), 0);
  auto claim = [&](CellId cell, const char* what) {
    if (!s.grid.in_range(cell)) throw RangeError(std::string(what) + " cell out of range");
    if (s.grid.is_obstacle(cell)) {
      throw OverlapError(std::string(what) + " placed on obstacle cell " + std::to_string(cell));
    }
    if (used[cell]) {
      throw OverlapError(std::string(what) + " shares cell " + std::to_string(cell) +
                         " with another robot or target");
    }
    used[cell] = 1;
  };
  for (CellId cell : s.robots) claim(cell, "robot");
  for (CellId cell : s.targets) claim(cell, "target");
  s.cost.validate();
}

ScenarioSpec refine_scenario(const ScenarioSpec& scenario, const Refinement& refinement) {
  ScenarioSpec fine = scenario;
  fine.grid = refinement.fine;
  for (CellId& cell : fine.robots) cell = refinement.center_subcell(cell);
  for (CellId& cell : fine.targets) cell = refinement.center_subcell(cell);
  return fine;
}

}  // namespace otnav
