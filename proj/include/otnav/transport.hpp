#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "otnav/cost.hpp"
#include "otnav/grid.hpp"
#include "otnav/scenario.hpp"

namespace otnav {

// Source/target distributions over the K cells, each entry 0 or 1.
// mu[k] = 0 exactly at targets, nu[k] = 0 exactly at robots; obstacle cells
// carry no mass in either.
struct Marginals {
  std::vector<std::uint8_t> mu;
  std::vector<std::uint8_t> nu;

  bool is_robot(CellId k) const { return mu[k] == 1 && nu[k] == 0; }
  bool is_target(CellId k) const { return mu[k] == 0 && nu[k] == 1; }
  bool is_open(CellId k) const { return mu[k] == 1 && nu[k] == 1; }
  std::int64_t source_mass() const;
  std::int64_t target_mass() const;
  std::vector<CellId> robots() const;
  std::vector<CellId> targets() const;

  friend bool operator==(const Marginals&, const Marginals&) = default;
};

Marginals build_marginals(const ScenarioSpec& scenario);
Marginals build_marginals(const GridWorld& grid, std::span<const CellId> robots,
                          std::span<const CellId> targets);

// Cost of the arc i -> j in the transport problem, or nullopt when the solver
// may not use it: i needs source mass, j needs target capacity, and
// non-adjacent jumps are limited by the jump rule and scope.
std::optional<Cost> transition_cost(const GridWorld& grid, const Marginals& marginals,
                                     const CostParams& params, CellId from, CellId to);

// Dense K x K view of the cost matrix. Obstacle rows/columns use
// obstacle_cost; unavailable jumps are reported as -1.
std::vector<Cost> dense_cost_matrix(const GridWorld& grid, const CostParams& params);

enum class PlanMode { kBalanced, kUnbalanced };
enum class Backend { kFlow, kDense };

struct Move {
  CellId from = 0;
  CellId to = 0;
  double mass = 1.0;
  Cost cost = 0;

  friend bool operator==(const Move&, const Move&) = default;
};

// Sparse optimal plan: `moves` holds every entry with from != to, sorted by
// (from, to); `fixed_points` holds the cells with pi_kk = 1.
struct TransportPlan {
  std::vector<Move> moves;
  std::vector<CellId> fixed_points;
  Cost total_cost = 0;
  std::int64_t moved_mass = 0;
  PlanMode mode = PlanMode::kBalanced;

  friend bool operator==(const TransportPlan&, const TransportPlan&) = default;
};

// Dense backend refuses grids larger than this.
inline constexpr CellId kDenseBackendMaxCells = 400;

// P1: exact marginals. ImbalanceError unless sum(mu) == sum(nu);
// InfeasibleError when no finite-cost plan exists.
TransportPlan solve_balanced(const GridWorld& grid, const Marginals& marginals,
                             const CostParams& params, Backend backend = Backend::kFlow);

// P2: marginals as upper bounds with total mass m = min(|mu|, |nu|).
TransportPlan solve_unbalanced(const GridWorld& grid, const Marginals& marginals,
                               const CostParams& params, Backend backend = Backend::kFlow);

// Balanced when N == M, unbalanced otherwise (or when forced).
TransportPlan solve(const ScenarioSpec& scenario, bool force_unbalanced = false,
                    Backend backend = Backend::kFlow);

}  // namespace otnav
