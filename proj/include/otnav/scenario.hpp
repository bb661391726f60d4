#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "otnav/cost.hpp"
#include "otnav/grid.hpp"
#include "otnav/mpc_config.hpp"

namespace otnav {

struct RowCol {
  int row = 0;
  int col = 0;
  friend bool operator==(const RowCol&, const RowCol&) = default;
};

// Inclusive rectangle of cells.
struct CellRect {
  int r0 = 0, c0 = 0, r1 = 0, c1 = 0;
};

// Raw scenario as written in a scenario file, before validation.
struct ScenarioDescription {
  int rows = 0;
  int cols = 0;
  double cell_size = 1.0;
  std::optional<Vec2> origin;  // default: center of cell (0,0) at (cell_size/2, cell_size/2)
  Connectivity connectivity = Connectivity::kEight;
  std::vector<RowCol> obstacles;
  std::vector<CellRect> obstacle_rects;
  std::vector<RowCol> robots;
  std::vector<RowCol> targets;
  CostParams cost;
  MpcConfig mpc;
  std::optional<std::uint64_t> seed;
};

// Validated scenario: robot, target and obstacle cells are pairwise disjoint.
// Robot n is robots[n]; target m is targets[m].
struct ScenarioSpec {
  GridWorld grid;
  std::vector<CellId> robots;
  std::vector<CellId> targets;
  CostParams cost;
  MpcConfig mpc;
  std::optional<std::uint64_t> seed;

  int robot_count() const { return static_cast<int>(robots.size()); }
  int target_count() const { return static_cast<int>(targets.size()); }
  int assignment_count() const { return std::min(robot_count(), target_count()); }
};

// Throws RangeError for out-of-range cells and OverlapError when a cell holds
// more than one entity. Requires at least one robot and one target.
ScenarioSpec build_scenario(const ScenarioDescription& description);
GridWorld build_grid(const ScenarioDescription& description);

// Same checks on an already-assembled scenario. `allow_empty` admits N = 0 or M = 0.
void validate_scenario(const ScenarioSpec& scenario, bool allow_empty = false);

// Refined copy: obstacles cover all subcells, robots and targets move to the
// center subcell of their coarse cell.
ScenarioSpec refine_scenario(const ScenarioSpec& scenario, const Refinement& refinement);

}  // namespace otnav
