#include "otnav/transport.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "otnav/assignment.hpp"
#include "otnav/errors.hpp"
#include "otnav/min_cost_flow.hpp"

namespace otnav {

std::int64_t Marginals::source_mass() const { return std::accumulate(mu.begin(), mu.end(), std::int64_t{0}); }

std::int64_t Marginals::target_mass() const { return std::accumulate(nu.begin(), nu.end(), std::int64_t{0}); }

std::vector<CellId> Marginals::robots() const {
  std::vector<CellId> out;
  for (CellId k = 0; k < static_cast<CellId>(mu.size()); ++k) {
    if (is_robot(k)) out.push_back(k);
  }
  return out;
}

std::vector<CellId> Marginals::targets() const {
  std::vector<CellId> out;
  for (CellId k = 0; k < static_cast<CellId>(mu.size()); ++k) {
    if (is_target(k)) out.push_back(k);
  }
  return out;
}

Marginals build_marginals(const ScenarioSpec& scenario) {
  return build_marginals(scenario.grid, scenario.robots, scenario.targets);
}

Marginals build_marginals(const GridWorld& grid, std::span<const CellId> robots,
                          std::span<const CellId> targets) {
  Marginals m;
  const auto k = static_cast<std::size_t>(grid.cell_count());
  m.mu.assign(k, 1);
  m.nu.assign(k, 1);
  for (CellId cell : grid.obstacles()) {
    m.mu[cell] = 0;
    m.nu[cell] = 0;
  }
  for (CellId cell : targets) {
    if (!grid.in_range(cell)) throw RangeError("target cell out of range");
    m.mu[cell] = 0;
  }
  for (CellId cell : robots) {
    if (!grid.in_range(cell)) throw RangeError("robot cell out of range");
    m.nu[cell] = 0;
  }
  return m;
}

std::optional<Cost> transition_cost(const GridWorld& grid, const Marginals& marginals,
                                    const CostParams& params, CellId from, CellId to) {
  if (!grid.in_range(from) || !grid.in_range(to)) throw RangeError("transition cell out of range");
  if (marginals.mu[from] == 0 || marginals.nu[to] == 0) return std::nullopt;
  if (from == to) return params.stay_cost;
  if (grid.adjacent(from, to)) return params.adjacent_cost;
  if (params.jump_rule == JumpRule::kDisabled) return std::nullopt;
  if (params.jump_scope == JumpScope::kRestricted) {
    const bool robot_to_target = marginals.is_robot(from) && marginals.is_target(to);
    const bool within_radius = grid.chebyshev(from, to) <= params.jump_radius;
    if (!robot_to_target && !within_radius) return std::nullopt;
  }
  return jump_cost(params, grid.manhattan(from, to));
}

std::vector<Cost> dense_cost_matrix(const GridWorld& grid, const CostParams& params) {
  const CellId k = grid.cell_count();
  if (k > kDenseBackendMaxCells) {
    throw TooLargeError("dense cost matrix limited to " + std::to_string(kDenseBackendMaxCells) + " cells");
  }
  std::vector<Cost> out(static_cast<std::size_t>(k) * k);
  for (CellId i = 0; i < k; ++i) {
    for (CellId j = 0; j < k; ++j) out[static_cast<std::size_t>(i) * k + j] = cost(params, grid, i, j).value_or(-1);
  }
  return out;
}

namespace {

void check_marginals(const GridWorld& grid, const Marginals& marginals) {
  const auto k = static_cast<std::size_t>(grid.cell_count());
  if (marginals.mu.size() != k || marginals.nu.size() != k) {
    throw RangeError("marginals length does not match the grid");
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (marginals.mu[i] > 1 || marginals.nu[i] > 1) throw RangeError("marginals must be 0/1 vectors");
    if (grid.is_obstacle(static_cast<CellId>(i)) && (marginals.mu[i] || marginals.nu[i])) {
      throw RangeError("obstacle cell carries mass");
    }
    if (!grid.is_obstacle(static_cast<CellId>(i)) && !marginals.mu[i] && !marginals.nu[i]) {
      throw OverlapError("cell " + std::to_string(i) + " is both a robot and a target");
    }
  }
}

// Sorted candidate heads j for arcs leaving i (excluding i itself).
std::vector<CellId> candidate_heads(const GridWorld& grid, const Marginals& marginals,
                                    const CostParams& params, CellId i) {
  std::vector<CellId> heads = grid.neighbors(i);
  if (params.jump_rule != JumpRule::kDisabled) {
    if (params.jump_scope == JumpScope::kFull) {
      for (CellId j = 0; j < grid.cell_count(); ++j) heads.push_back(j);
    } else {
      if (marginals.is_robot(i)) {
        for (CellId j = 0; j < grid.cell_count(); ++j) {
          if (marginals.is_target(j)) heads.push_back(j);
        }
      }
      const int r = params.jump_radius;
      for (int dr = -r; dr <= r; ++dr) {
        for (int dc = -r; dc <= r; ++dc) {
          const int rr = grid.row(i) + dr;
          const int cc = grid.col(i) + dc;
          if (rr >= 0 && rr < grid.rows() && cc >= 0 && cc < grid.cols()) heads.push_back(grid.index(rr, cc));
        }
      }
    }
  }
  std::sort(heads.begin(), heads.end());
  heads.erase(std::unique(heads.begin(), heads.end()), heads.end());
  std::erase(heads, i);
  return heads;
}

void finish_plan(TransportPlan& plan) {
  std::sort(plan.moves.begin(), plan.moves.end(),
            [](const Move& a, const Move& b) { return std::pair(a.from, a.to) < std::pair(b.from, b.to); });
  std::sort(plan.fixed_points.begin(), plan.fixed_points.end());
  plan.moved_mass = static_cast<std::int64_t>(plan.moves.size() + plan.fixed_points.size());
}

// Vertex-disjoint robot -> target chains through open cells: each open cell
// is split into in/out nodes joined by a unit arc.
TransportPlan solve_flow(const GridWorld& grid, const Marginals& marginals, const CostParams& params,
                         std::int64_t routed, PlanMode mode) {
  const CellId k = grid.cell_count();
  if (params.jump_rule != JumpRule::kDisabled && params.jump_scope == JumpScope::kFull &&
      k > kDenseBackendMaxCells) {
    throw TooLargeError("full jump scope limited to " + std::to_string(kDenseBackendMaxCells) + " cells");
  }
  constexpr int kSource = 0;
  constexpr int kSink = 1;
  auto in_node = [](CellId c) { return 2 + 2 * c; };
  auto out_node = [](CellId c) { return 3 + 2 * c; };

  MinCostFlow flow(2 + 2 * k);
  std::vector<int> pass_arc(static_cast<std::size_t>(k), -1);
  for (CellId c = 0; c < k; ++c) {
    if (marginals.is_robot(c)) flow.add_arc(kSource, out_node(c), 1, 0);
    if (marginals.is_open(c)) pass_arc[c] = flow.add_arc(in_node(c), out_node(c), 1, 0);
    if (marginals.is_target(c)) flow.add_arc(in_node(c), kSink, 1, 0);
  }
  struct Transition {
    int arc;
    CellId from, to;
    Cost cost;
  };
  std::vector<Transition> transitions;
  for (CellId i = 0; i < k; ++i) {
    if (marginals.mu[i] == 0) continue;
    for (CellId j : candidate_heads(grid, marginals, params, i)) {
      const auto c = transition_cost(grid, marginals, params, i, j);
      if (!c) continue;
      transitions.push_back({flow.add_arc(out_node(i), in_node(j), 1, *c), i, j, *c});
    }
  }

  const auto result = flow.solve(kSource, kSink, routed);
  if (result.flow < routed) {
    throw InfeasibleError("only " + std::to_string(result.flow) + " of " + std::to_string(routed) +
                          " robots can be routed with the available transitions");
  }

  TransportPlan plan;
  plan.mode = mode;
  plan.total_cost = result.cost;
  for (const Transition& t : transitions) {
    if (flow.flow(t.arc) > 0) plan.moves.push_back({t.from, t.to, 1.0, t.cost});
  }
  for (CellId c = 0; c < k; ++c) {
    if (pass_arc[c] >= 0 && flow.flow(pass_arc[c]) == 0) plan.fixed_points.push_back(c);
  }
  finish_plan(plan);
  return plan;
}

TransportPlan solve_dense(const GridWorld& grid, const Marginals& marginals, const CostParams& params,
                          PlanMode mode) {
  if (grid.cell_count() > kDenseBackendMaxCells) {
    throw TooLargeError("dense backend limited to " + std::to_string(kDenseBackendMaxCells) + " cells");
  }
  constexpr Cost kForbidden = 10'000'000'000'000'000;
  std::vector<CellId> rows, cols;
  for (CellId c = 0; c < grid.cell_count(); ++c) {
    if (marginals.mu[c]) rows.push_back(c);
    if (marginals.nu[c]) cols.push_back(c);
  }
  const int n = static_cast<int>(rows.size());
  const int m = static_cast<int>(cols.size());
  std::vector<Cost> matrix(static_cast<std::size_t>(n) * m);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < m; ++c) {
      matrix[static_cast<std::size_t>(r) * m + c] =
          transition_cost(grid, marginals, params, rows[r], cols[c]).value_or(kForbidden);
    }
  }
  const AssignmentResult assignment = solve_assignment(n, m, matrix);

  TransportPlan plan;
  plan.mode = mode;
  for (int r = 0; r < n; ++r) {
    const int c = assignment.row_to_col[r];
    if (c < 0) continue;
    const Cost value = matrix[static_cast<std::size_t>(r) * m + c];
    if (value >= kForbidden) throw InfeasibleError("no finite-cost plan exists with the available transitions");
    if (rows[r] == cols[c]) {
      plan.fixed_points.push_back(rows[r]);
    } else {
      plan.moves.push_back({rows[r], cols[c], 1.0, value});
    }
    plan.total_cost += value;
  }
  finish_plan(plan);
  return plan;
}

}  // namespace

TransportPlan solve_balanced(const GridWorld& grid, const Marginals& marginals, const CostParams& params,
                             Backend backend) {
  check_marginals(grid, marginals);
  params.validate();
  const auto robots = static_cast<std::int64_t>(marginals.robots().size());
  if (marginals.source_mass() != marginals.target_mass()) {
    throw ImbalanceError("balanced transport needs sum(mu) == sum(nu), got " +
                         std::to_string(marginals.source_mass()) + " and " +
                         std::to_string(marginals.target_mass()));
  }
  if (backend == Backend::kDense) return solve_dense(grid, marginals, params, PlanMode::kBalanced);
  return solve_flow(grid, marginals, params, robots, PlanMode::kBalanced);
}

TransportPlan solve_unbalanced(const GridWorld& grid, const Marginals& marginals, const CostParams& params,
                               Backend backend) {
  check_marginals(grid, marginals);
  params.validate();
  if (backend == Backend::kDense) return solve_dense(grid, marginals, params, PlanMode::kUnbalanced);
  const auto routed = static_cast<std::int64_t>(
      std::min(marginals.robots().size(), marginals.targets().size()));
  return solve_flow(grid, marginals, params, routed, PlanMode::kUnbalanced);
}

TransportPlan solve(const ScenarioSpec& scenario, bool force_unbalanced, Backend backend) {
  const Marginals marginals = build_marginals(scenario);
  if (!force_unbalanced && scenario.robot_count() == scenario.target_count()) {
    return solve_balanced(scenario.grid, marginals, scenario.cost, backend);
  }
  return solve_unbalanced(scenario.grid, marginals, scenario.cost, backend);
}

}  // namespace otnav
