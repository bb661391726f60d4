#include "otnav/cost.hpp"

#include "otnav/errors.hpp"

namespace otnav {

void CostParams::validate() const {
  if (stay_cost != 0) throw ConfigError("stay_cost must be 0");
  if (adjacent_cost <= 0) throw ConfigError("adjacent_cost must be positive");
  if (obstacle_cost <= adjacent_cost) throw ConfigError("obstacle_cost must exceed adjacent_cost");
  if (jump_radius < 0) throw ConfigError("jump_radius must be >= 0");
  if (jump_rule == JumpRule::kPowManhattan) {
    if (jump_base < 2 || jump_cost(*this, 2) <= 2 * adjacent_cost) {
      throw ConfigError("jump_base^2 must exceed two adjacent steps");
    }
  }
}

Cost jump_cost(const CostParams& params, int manhattan_distance) {
  Cost value = 1;
  for (int i = 0; i < manhattan_distance; ++i) {
    if (value > kJumpCostCap / params.jump_base) return kJumpCostCap;
    value *= params.jump_base;
  }
  return value;
}

std::optional<Cost> cost(const CostParams& params, const GridWorld& grid, CellId from, CellId to) {
  if (!grid.in_range(from) || !grid.in_range(to)) {
    throw RangeError("cost(" + std::to_string(from) + ", " + std::to_string(to) + ") out of range");
  }
  if (from == to) return params.stay_cost;
  if (grid.is_obstacle(from) || grid.is_obstacle(to)) return params.obstacle_cost;
  if (grid.adjacent(from, to)) return params.adjacent_cost;
  if (params.jump_rule == JumpRule::kDisabled) return std::nullopt;
  return jump_cost(params, grid.manhattan(from, to));
}

}  // namespace otnav
