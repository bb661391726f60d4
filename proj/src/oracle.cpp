#include "otnav/oracle.hpp"

#include <algorithm>
#include <string>

#include "otnav/errors.hpp"

namespace otnav {

namespace {

// Arc cost written out from the cost rule, independent of the solver's graph.
std::optional<Cost> arc_cost(const GridWorld& grid, const Marginals& mg, const CostParams& params, CellId i,
                             CellId j) {
  if (i == j) return params.stay_cost;
  if (grid.adjacent(i, j)) return params.adjacent_cost;
  if (params.jump_rule == JumpRule::kDisabled) return std::nullopt;
  const bool allowed = params.jump_scope == JumpScope::kFull || (mg.is_robot(i) && mg.is_target(j)) ||
                       grid.chebyshev(i, j) <= params.jump_radius;
  if (!allowed) return std::nullopt;
  Cost c = 1;
  for (int d = grid.manhattan(i, j); d > 0; --d) {
    if (c >= kJumpCostCap / std::max<Cost>(params.jump_base, 1)) return kJumpCostCap;
    c *= params.jump_base;
  }
  return std::min(c, kJumpCostCap);
}

class Enumerator {
 public:
  Enumerator(const GridWorld& grid, const Marginals& mg, const CostParams& params, PlanMode mode)
      : mode_(mode) {
    for (CellId k = 0; k < grid.cell_count(); ++k) {
      if (mg.mu[k]) sources_.push_back(k);
      if (mg.nu[k]) sinks_.push_back(k);
    }
    costs_.assign(sources_.size() * sinks_.size(), std::nullopt);
    for (std::size_t a = 0; a < sources_.size(); ++a) {
      for (std::size_t b = 0; b < sinks_.size(); ++b) {
        costs_[a * sinks_.size() + b] = arc_cost(grid, mg, params, sources_[a], sinks_[b]);
      }
    }
    mass_ = static_cast<int>(std::min(sources_.size(), sinks_.size()));
    used_.assign(sinks_.size(), false);
    choice_.assign(sources_.size(), -1);
  }

  OracleResult run() {
    dfs(0, 0, 0);
    return std::move(result_);
  }

 private:
  void dfs(std::size_t a, int placed, Cost cost) {
    if (result_.optimal_cost && cost > *result_.optimal_cost) return;
    const int remaining = static_cast<int>(sources_.size() - a);
    if (placed + remaining < mass_) return;
    if (a == sources_.size()) {
      ++result_.explored;
      record(cost);
      return;
    }
    for (std::size_t b = 0; b < sinks_.size(); ++b) {
      const auto& c = costs_[a * sinks_.size() + b];
      if (used_[b] || !c) continue;
      used_[b] = true;
      choice_[a] = static_cast<int>(b);
      dfs(a + 1, placed + 1, cost + *c);
      used_[b] = false;
    }
    choice_[a] = -1;
    // Leaving a source empty is only allowed when its mass is not required.
    if (mode_ == PlanMode::kUnbalanced) dfs(a + 1, placed, cost);
  }

  void record(Cost cost) {
    if (!result_.optimal_cost || cost < *result_.optimal_cost) {
      result_.optimal_cost = cost;
      result_.optimal_plans.clear();
    }
    TransportPlan plan;
    plan.mode = mode_;
    plan.total_cost = cost;
    for (std::size_t a = 0; a < sources_.size(); ++a) {
      if (choice_[a] < 0) continue;
      const CellId i = sources_[a];
      const CellId j = sinks_[choice_[a]];
      ++plan.moved_mass;
      if (i == j) {
        plan.fixed_points.push_back(i);
      } else {
        plan.moves.push_back({i, j, 1.0, *costs_[a * sinks_.size() + choice_[a]]});
      }
    }
    std::ranges::sort(plan.moves, {}, [](const Move& m) { return std::pair(m.from, m.to); });
    std::ranges::sort(plan.fixed_points);
    result_.optimal_plans.push_back(std::move(plan));
  }

  PlanMode mode_;
  std::vector<CellId> sources_, sinks_;
  std::vector<std::optional<Cost>> costs_;
  int mass_ = 0;
  std::vector<bool> used_;
  std::vector<int> choice_;
  OracleResult result_;
};

}  // namespace

OracleResult brute_force_oracle(const GridWorld& grid, const Marginals& marginals, const CostParams& params,
                                PlanMode mode) {
  if (grid.free_count() > kOracleMaxFreeCells) {
    throw TooLargeError("oracle enumerates at most " + std::to_string(kOracleMaxFreeCells) + " free cells, got " +
                        std::to_string(grid.free_count()));
  }
  if (mode == PlanMode::kBalanced && marginals.source_mass() != marginals.target_mass()) {
    throw ImbalanceError("balanced oracle needs equal marginal masses");
  }
  return Enumerator(grid, marginals, params, mode).run();
}

OracleResult brute_force_oracle(const ScenarioSpec& scenario) {
  const PlanMode mode =
      scenario.robot_count() == scenario.target_count() ? PlanMode::kBalanced : PlanMode::kUnbalanced;
  return brute_force_oracle(scenario.grid, build_marginals(scenario), scenario.cost, mode);
}

}  // namespace otnav
