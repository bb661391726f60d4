#include <gtest/gtest.h>

#include <algorithm>

#include "../common/scenarios.hpp"
#include "otnav/errors.hpp"
#include "otnav/generator.hpp"
#include "otnav/grid.hpp"
#include "otnav/scenario.hpp"

using namespace otnav;

TEST(GridWorld, Fig2ScenarioHasSixCells) {
  const ScenarioSpec s = fixtures::fig2();
  EXPECT_EQ(s.grid.cell_count(), 6);
  EXPECT_EQ(s.robots, std::vector<CellId>{0});
  EXPECT_EQ(s.targets, std::vector<CellId>{5});
}

TEST(GridWorld, RobotAndTargetOnOneCellOverlap) {
  ScenarioDescription d;
  d.rows = d.cols = 1;
  d.robots = {{0, 0}};
  d.targets = {{0, 0}};
  EXPECT_THROW(build_scenario(d), OverlapError);
}

TEST(GridWorld, PlacementErrors) {
  ScenarioDescription d;
  d.rows = 2;
  d.cols = 2;
  d.obstacles = {{0, 1}};
  d.robots = {{0, 1}};
  d.targets = {{1, 1}};
  EXPECT_THROW(build_scenario(d), OverlapError);
  d.robots = {{2, 0}};
  EXPECT_THROW(build_scenario(d), RangeError);
  d.robots = {};
  EXPECT_THROW(build_scenario(d), RangeError);
  d.rows = 0;
  EXPECT_THROW(build_grid(d), RangeError);
}

TEST(GridWorld, SectionSixGrid) {
  GeneratorParams p;
  p.rows = 50;
  p.cols = 75;
  p.robots = p.targets = 20;
  p.obstacle_rects = 25;
  p.seed = 3;
  const ScenarioSpec s = generate_scenario(p);
  EXPECT_EQ(s.grid.cell_count(), 3750);
  EXPECT_NO_THROW(validate_scenario(s));
}

TEST(Neighbors, Fig2CornerCell) {
  const GridWorld g(2, 3);
  EXPECT_EQ(g.neighbors(0), (std::vector<CellId>{1, 3, 4}));
  EXPECT_EQ(neighbors(g, 0), g.neighbors(0));
}

TEST(Neighbors, SingleCellHasNone) { EXPECT_TRUE(GridWorld(1, 1).neighbors(0).empty()); }

TEST(Neighbors, CenterOfThreeByThree) {
  EXPECT_EQ(GridWorld(3, 3).neighbors(4), (std::vector<CellId>{0, 1, 2, 3, 5, 6, 7, 8}));
}

TEST(Neighbors, ExcludesObstaclesAndChecksRange) {
  const std::vector<CellId> obstacles{1};
  const GridWorld g(3, 3, 1.0, Vec2(0.5, 0.5), obstacles);
  EXPECT_EQ(g.neighbors(4), (std::vector<CellId>{0, 2, 3, 5, 6, 7, 8}));
  EXPECT_THROW(g.neighbors(9), RangeError);
  EXPECT_THROW(g.neighbors(-1), RangeError);
}

TEST(Neighbors, FourAndStrictConnectivity) {
  const std::vector<CellId> obstacles{1};
  const GridWorld four(3, 3, 1.0, Vec2(0.5, 0.5), {}, Connectivity::kFour);
  EXPECT_EQ(four.neighbors(4), (std::vector<CellId>{1, 3, 5, 7}));
  const GridWorld strict(3, 3, 1.0, Vec2(0.5, 0.5), obstacles, Connectivity::kEightStrict);
  // Diagonals 0 and 2 would cut the corner of obstacle 1.
  EXPECT_EQ(strict.neighbors(4), (std::vector<CellId>{3, 5, 6, 7, 8}));
}

TEST(Neighbors, SymmetricOnRandomGrids) {
  Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const int rows = static_cast<int>(rng.uniform_int(1, 7));
    const int cols = static_cast<int>(rng.uniform_int(1, 7));
    std::vector<CellId> obstacles;
    for (CellId c = 0; c < rows * cols; ++c) {
      if (rng.bernoulli(0.25)) obstacles.push_back(c);
    }
    const GridWorld g(rows, cols, 1.0, Vec2(0.5, 0.5), obstacles, static_cast<Connectivity>(trial % 3));
    for (CellId i = 0; i < g.cell_count(); ++i) {
      const auto ni = g.neighbors(i);
      EXPECT_TRUE(std::ranges::is_sorted(ni));
      for (CellId j : ni) {
        EXPECT_TRUE(g.is_free(j));
        const auto nj = g.neighbors(j);
        if (g.is_free(i)) EXPECT_NE(std::ranges::find(nj, i), nj.end()) << i << " " << j;
      }
    }
  }
}

TEST(CellCenter, LatticeAndRoundTrip) {
  const GridWorld g(2, 3);
  EXPECT_EQ(g.cell_center(0), Vec2(0.5, 0.5));
  EXPECT_EQ(g.cell_center(4), Vec2(1.5, 1.5));
  EXPECT_EQ(cell_center(g, 5), Vec2(2.5, 1.5));
  const GridWorld scaled(4, 5, 0.25, Vec2(1.0, -2.0));
  for (CellId c = 0; c < scaled.cell_count(); ++c) EXPECT_EQ(scaled.locate(scaled.cell_center(c)), c);
  EXPECT_THROW(g.locate(Vec2(-0.1, 0.5)), RangeError);
  EXPECT_THROW(g.locate(Vec2(0.5, 2.1)), RangeError);
  EXPECT_THROW(g.cell_center(6), RangeError);
}

TEST(Refine, SubdivisionArithmetic) {
  const Refinement r = refine(GridWorld(2, 3), 2);
  EXPECT_EQ(r.fine.rows(), 4);
  EXPECT_EQ(r.fine.cols(), 6);
  EXPECT_EQ(r.fine.cell_count(), 24);
  EXPECT_EQ(r.subcells(0), (std::vector<CellId>{0, 1, 6, 7}));
  EXPECT_DOUBLE_EQ(r.fine.cell_size(), 0.5);
}

TEST(Refine, ObstaclesCoverAllSubcells) {
  const std::vector<CellId> obstacles{4};
  const GridWorld g(2, 3, 1.0, Vec2(0.5, 0.5), obstacles);
  const Refinement r = refine(g, 2);
  EXPECT_EQ(r.fine.obstacles().size(), 4u);
  for (CellId f : r.subcells(4)) EXPECT_TRUE(r.fine.is_obstacle(f));
  for (CellId c = 0; c < g.cell_count(); ++c) {
    for (CellId f : r.subcells(c)) EXPECT_EQ(r.fine.is_obstacle(f), g.is_obstacle(c));
  }
}

TEST(Refine, FineToCoarseIsSurjectiveAndConsistent) {
  const GridWorld g(3, 4, 2.0, Vec2(1.0, 1.0));
  for (int s : {1, 2, 3}) {
    const Refinement r = refine(g, s);
    ASSERT_EQ(r.fine_to_coarse.size(), static_cast<std::size_t>(r.fine.cell_count()));
    for (CellId c = 0; c < g.cell_count(); ++c) {
      EXPECT_EQ(r.fine_to_coarse[r.center_subcell(c)], c);
      for (CellId f : r.subcells(c)) EXPECT_EQ(r.fine_to_coarse[f], c);
      // The fine cell under a coarse center lies inside the coarse cell.
      EXPECT_EQ(r.fine_to_coarse[r.fine.locate(g.cell_center(c))], c);
    }
  }
  EXPECT_THROW(refine(g, 0), RangeError);
}

TEST(Refine, ScenarioMovesEntitiesToCenterSubcells) {
  const ScenarioSpec s = fixtures::fig2();
  const Refinement r = refine(s.grid, 2);
  const ScenarioSpec fine = refine_scenario(s, r);
  EXPECT_EQ(fine.robots[0], r.center_subcell(0));
  EXPECT_EQ(fine.targets[0], r.center_subcell(5));
  EXPECT_NO_THROW(validate_scenario(fine));
}
