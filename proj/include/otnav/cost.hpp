#pragma once

#include <cstdint>
#include <optional>

#include "otnav/grid.hpp"

namespace otnav {

using Cost = std::int64_t;

// Jump costs saturate here so jump_base^distance never overflows on large grids.
inline constexpr Cost kJumpCostCap = 1'000'000'000'000;

enum class JumpRule { kPowManhattan, kDisabled };

// Which non-adjacent transitions the solver may use as arcs.
enum class JumpScope {
  kRestricted,  // robot cell -> target cell, plus pairs within jump_radius
  kFull,        // every ordered pair of free cells (small grids only)
};

struct CostParams {
  Cost adjacent_cost = 1;
  Cost stay_cost = 0;
  Cost jump_base = 10;
  JumpRule jump_rule = JumpRule::kPowManhattan;
  JumpScope jump_scope = JumpScope::kRestricted;
  int jump_radius = 0;
  // Only used by the dense matrix view; the solvers never route into obstacles.
  Cost obstacle_cost = 1'000'000;

  // ConfigError unless stay_cost == 0, adjacent_cost > 0 and jumps (when enabled)
  // cost more than any two-step detour.
  void validate() const;

  friend bool operator==(const CostParams&, const CostParams&) = default;
};

// jump_base^distance, saturated at kJumpCostCap.
Cost jump_cost(const CostParams& params, int manhattan_distance);

// Transition cost between two cells. 0 on the diagonal, adjacent_cost for
// neighbors, jump_base^manhattan otherwise; nullopt when jumps are disabled.
// Moving into or out of an obstacle yields obstacle_cost.
std::optional<Cost> cost(const CostParams& params, const GridWorld& grid, CellId from, CellId to);

}  // namespace otnav
