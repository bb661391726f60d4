#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "otnav/transport.hpp"

namespace otnav {

inline constexpr CellId kOracleMaxFreeCells = 9;

struct OracleResult {
  std::optional<Cost> optimal_cost;         // nullopt when no finite-cost plan exists
  std::vector<TransportPlan> optimal_plans;  // every argmin, in enumeration order
  std::int64_t explored = 0;                 // complete plans evaluated
};

// Exhaustive search over 0/1 plans: partial bijections from cells with mu = 1
// onto cells with nu = 1, covering both marginals (balanced) or moving
// exactly m = min(|mu|, |nu|) units (unbalanced). Arc availability follows
// the same jump rule and scope as the solvers. TooLargeError above
// kOracleMaxFreeCells free cells.
OracleResult brute_force_oracle(const GridWorld& grid, const Marginals& marginals, const CostParams& params,
                                PlanMode mode);

// Balanced when N == M, unbalanced otherwise.
OracleResult brute_force_oracle(const ScenarioSpec& scenario);

}  // namespace otnav
