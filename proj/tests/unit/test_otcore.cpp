#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "../common/random_scenarios.hpp"
#include "../common/scenarios.hpp"
#include "otnav/assignment.hpp"
#include "otnav/errors.hpp"
#include "otnav/generator.hpp"
#include "otnav/min_cost_flow.hpp"
#include "otnav/oracle.hpp"
#include "otnav/plans.hpp"
#include "otnav/transport.hpp"

using namespace otnav;

namespace {

void expect_marginals_respected(const TransportPlan& plan, const Marginals& mg) {
  const std::size_t k = mg.mu.size();
  std::vector<int> out(k, 0), in(k, 0);
  for (const Move& m : plan.moves) {
    EXPECT_EQ(m.mass, 1.0);
    ++out[m.from];
    ++in[m.to];
  }
  for (CellId c : plan.fixed_points) {
    ++out[c];
    ++in[c];
  }
  std::int64_t total = 0;
  for (std::size_t c = 0; c < k; ++c) {
    total += out[c];
    if (plan.mode == PlanMode::kBalanced) {
      EXPECT_EQ(out[c], mg.mu[c]) << c;
      EXPECT_EQ(in[c], mg.nu[c]) << c;
    } else {
      EXPECT_LE(out[c], mg.mu[c]) << c;
      EXPECT_LE(in[c], mg.nu[c]) << c;
    }
  }
  EXPECT_EQ(total, plan.moved_mass);
  if (plan.mode == PlanMode::kUnbalanced) {
    EXPECT_EQ(plan.moved_mass, std::min(mg.source_mass(), mg.target_mass()));
  }
}

}  // namespace

TEST(Marginals, Fig2Vectors) {
  const Marginals mg = build_marginals(fixtures::fig2());
  EXPECT_EQ(mg.mu, (std::vector<std::uint8_t>{1, 1, 1, 1, 1, 0}));
  EXPECT_EQ(mg.nu, (std::vector<std::uint8_t>{0, 1, 1, 1, 1, 1}));
  EXPECT_EQ(mg.source_mass(), 5);
  EXPECT_EQ(mg.target_mass(), 5);
}

TEST(Marginals, ExtraRobotZeroesNu) {
  const Marginals mg = build_marginals(fixtures::fig2({{0, 1}}));
  EXPECT_EQ(mg.nu, (std::vector<std::uint8_t>{0, 0, 1, 1, 1, 1}));
  EXPECT_EQ(mg.target_mass(), 4);
}

TEST(Marginals, ObstaclesCarryNoMass) {
  const std::vector<CellId> obstacles{2};
  const GridWorld g(2, 3, 1.0, Vec2(0.5, 0.5), obstacles);
  const std::vector<CellId> robots{0}, targets{5};
  const Marginals mg = build_marginals(g, robots, targets);
  EXPECT_EQ(mg.mu[2], 0);
  EXPECT_EQ(mg.nu[2], 0);
}

TEST(Marginals, EmptyScenarioGivesIdentityPlan) {
  const GridWorld g(2, 3);
  const Marginals mg = build_marginals(g, {}, {});
  EXPECT_EQ(mg.mu, std::vector<std::uint8_t>(6, 1));
  EXPECT_EQ(mg.nu, std::vector<std::uint8_t>(6, 1));
  const TransportPlan plan = solve_balanced(g, mg, CostParams{});
  EXPECT_EQ(plan.total_cost, 0);
  EXPECT_TRUE(plan.moves.empty());
  EXPECT_EQ(plan.fixed_points.size(), 6u);
}

TEST(Cost, Fig2Matrix) {
  const Cost expected[6][6] = {{0, 1, 100, 1, 1, 1000},   {1, 0, 1, 1, 1, 1},     {100, 1, 0, 1000, 1, 1},
                               {1, 1, 1000, 0, 1, 100},   {1, 1, 1, 1, 0, 1},     {1000, 1, 1, 100, 1, 0}};
  const GridWorld g(2, 3);
  const CostParams params;
  for (CellId i = 0; i < 6; ++i) {
    for (CellId j = 0; j < 6; ++j) EXPECT_EQ(cost(params, g, i, j), expected[i][j]) << i << "," << j;
  }
  const auto dense = dense_cost_matrix(g, params);
  for (CellId i = 0; i < 6; ++i) {
    for (CellId j = 0; j < 6; ++j) EXPECT_EQ(dense[i * 6 + j], expected[i][j]);
  }
}

TEST(Cost, DiagonalZeroAndSymmetric) {
  const GridWorld g(4, 4);
  const CostParams params;
  for (CellId i = 0; i < 16; ++i) {
    EXPECT_EQ(cost(params, g, i, i), 0);
    for (CellId j = 0; j < 16; ++j) EXPECT_EQ(cost(params, g, i, j), cost(params, g, j, i));
  }
  EXPECT_THROW(cost(params, g, 0, 16), RangeError);
}

TEST(Cost, ObstaclesDisabledJumpsAndSaturation) {
  const std::vector<CellId> obstacles{1};
  const GridWorld g(2, 3, 1.0, Vec2(0.5, 0.5), obstacles);
  CostParams params;
  EXPECT_EQ(cost(params, g, 0, 1), params.obstacle_cost);
  params.jump_rule = JumpRule::kDisabled;
  EXPECT_EQ(cost(params, g, 0, 2), std::nullopt);
  EXPECT_EQ(dense_cost_matrix(g, params)[2], -1);
  EXPECT_EQ(jump_cost(CostParams{}, 40), kJumpCostCap);
  EXPECT_EQ(jump_cost(CostParams{}, 3), 1000);
}

TEST(Cost, ValidationRejectsBadParameters) {
  CostParams p;
  p.stay_cost = 1;
  EXPECT_THROW(p.validate(), ConfigError);
  p = {};
  p.adjacent_cost = 0;
  EXPECT_THROW(p.validate(), ConfigError);
  p = {};
  p.jump_base = 1;
  EXPECT_THROW(p.validate(), ConfigError);
}

TEST(SolveBalanced, Fig2CostTwo) {
  const ScenarioSpec s = fixtures::fig2();
  const Marginals mg = build_marginals(s);
  for (Backend backend : {Backend::kFlow, Backend::kDense}) {
    const TransportPlan plan = solve_balanced(s.grid, mg, s.cost, backend);
    EXPECT_EQ(plan.total_cost, 2);
    EXPECT_EQ(plan.mode, PlanMode::kBalanced);
    ASSERT_EQ(plan.moves.size(), 2u);
    EXPECT_EQ(plan.moves[0].from, 0);
    EXPECT_TRUE(plan.moves[0].to == 1 || plan.moves[0].to == 4);
    EXPECT_EQ(plan.moves[1].to, 5);
    EXPECT_EQ(plan.fixed_points.size(), 3u);
    expect_marginals_respected(plan, mg);
  }
}

TEST(SolveBalanced, ImbalanceAndInfeasibility) {
  const ScenarioSpec two = fixtures::fig2({{0, 1}});
  EXPECT_THROW(solve_balanced(two.grid, build_marginals(two), two.cost), ImbalanceError);

  ScenarioSpec walled = fixtures::corridor();
  walled.cost.jump_rule = JumpRule::kDisabled;
  EXPECT_THROW(solve(walled), InfeasibleError);
  EXPECT_THROW(solve(walled, false, Backend::kDense), InfeasibleError);
}

TEST(SolveBalanced, DeterministicAcrossCalls) {
  GeneratorParams p;
  p.rows = 12;
  p.cols = 15;
  p.robots = p.targets = 6;
  p.seed = 9;
  const ScenarioSpec s = generate_scenario(p);
  EXPECT_EQ(solve(s), solve(s));
}

TEST(SolveUnbalanced, ExtraRobotCostOne) {
  const ScenarioSpec s = fixtures::fig2({{0, 1}});
  const Marginals mg = build_marginals(s);
  for (Backend backend : {Backend::kFlow, Backend::kDense}) {
    const TransportPlan plan = solve_unbalanced(s.grid, mg, s.cost, backend);
    EXPECT_EQ(plan.total_cost, 1);
    EXPECT_EQ(plan.moved_mass, 4);
    ASSERT_EQ(plan.moves.size(), 1u);
    EXPECT_EQ(plan.moves[0], (Move{1, 5, 1.0, 1}));
    EXPECT_EQ(plan.fixed_points, (std::vector<CellId>{2, 3, 4}));
    expect_marginals_respected(plan, mg);
  }
}

TEST(SolveUnbalanced, MatchesBalancedWhenCountsAgree) {
  Rng rng(17);
  for (int i = 0; i < 20; ++i) {
    GeneratorParams p;
    p.rows = static_cast<int>(rng.uniform_int(4, 9));
    p.cols = static_cast<int>(rng.uniform_int(4, 9));
    p.robots = p.targets = static_cast<int>(rng.uniform_int(1, 4));
    p.seed = static_cast<std::uint64_t>(i);
    const ScenarioSpec s = generate_scenario(p);
    const Marginals mg = build_marginals(s);
    EXPECT_EQ(solve_unbalanced(s.grid, mg, s.cost).total_cost, solve_balanced(s.grid, mg, s.cost).total_cost);
  }
}

TEST(SolveUnbalanced, TwelveRobotsFourteenTargetsLeaveTwoUnassigned) {
  GeneratorParams p;
  p.rows = 12;
  p.cols = 16;
  p.robots = 12;
  p.targets = 14;
  p.seed = 4;
  const ScenarioSpec s = generate_scenario(p);
  const TransportPlan plan = solve(s);
  EXPECT_EQ(plan.mode, PlanMode::kUnbalanced);
  const PathSystem paths = extract_chains(plan, s);
  std::set<int> reached;
  for (const Chain& c : paths.chains) reached.insert(c.target);
  EXPECT_EQ(reached.size(), 12u);
  EXPECT_EQ(s.target_count() - static_cast<int>(reached.size()), 2);
  expect_marginals_respected(plan, build_marginals(s));
}

TEST(Solve, AgreesWithOracleAndDenseBackend) {
  Rng rng(99);
  for (int i = 0; i < 150; ++i) {
    const ScenarioSpec s = fixtures::random_small_scenario(rng);
    const OracleResult oracle = brute_force_oracle(s);
    try {
      const TransportPlan flow = solve(s);
      const TransportPlan dense = solve(s, false, Backend::kDense);
      ASSERT_TRUE(oracle.optimal_cost.has_value());
      EXPECT_EQ(flow.total_cost, *oracle.optimal_cost);
      EXPECT_EQ(dense.total_cost, *oracle.optimal_cost);
      EXPECT_NE(std::ranges::find(oracle.optimal_plans, flow), oracle.optimal_plans.end());
      expect_marginals_respected(flow, build_marginals(s));
      expect_marginals_respected(dense, build_marginals(s));
    } catch (const InfeasibleError&) {
      EXPECT_FALSE(oracle.optimal_cost.has_value());
    }
  }
}

TEST(Solve, RefinementNeverIncreasesWorldCost) {
  for (const ScenarioSpec& s : {fixtures::fig2(), fixtures::two_corridors(), fixtures::straight_line(6)}) {
    const double coarse = static_cast<double>(solve(s).total_cost);
    for (int f : {2, 3}) EXPECT_LE(refine_replan(s, f).world_cost, coarse + 1e-12);
  }
}

TEST(Solve, DenseBackendRefusesLargeGrids) {
  GeneratorParams p;
  p.rows = 21;
  p.cols = 20;
  p.robots = p.targets = 2;
  const ScenarioSpec s = generate_scenario(p);
  EXPECT_THROW(solve(s, false, Backend::kDense), TooLargeError);
}

TEST(MinCostFlow, SmallNetwork) {
  // Two parallel routes of cost 1 and 3; two units must use both.
  MinCostFlow f(4);
  f.add_arc(0, 1, 1, 1);
  f.add_arc(0, 2, 1, 3);
  f.add_arc(1, 3, 1, 0);
  f.add_arc(2, 3, 1, 0);
  const auto r = f.solve(0, 3, 5);
  EXPECT_EQ(r.flow, 2);
  EXPECT_EQ(r.cost, 4);
}

TEST(Assignment, RectangularHungarian) {
  const std::vector<Cost> c{4, 1, 3, 2, 0, 5};  // 2 x 3
  const auto r = solve_assignment(2, 3, c);
  EXPECT_EQ(r.cost, 3);  // two optima: (1, 0) and (2, 1)
  EXPECT_EQ(c[r.row_to_col[0]] + c[3 + r.row_to_col[1]], 3);
  EXPECT_NE(r.row_to_col[0], r.row_to_col[1]);
  const std::vector<Cost> t{4, 2, 1, 0, 3, 5};  // 3 x 2
  const auto rt = solve_assignment(3, 2, t);
  EXPECT_EQ(rt.cost, 3);
  EXPECT_EQ(std::ranges::count(rt.row_to_col, -1), 1);
}
