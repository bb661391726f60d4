#pragma once

#include <algorithm>
#include <vector>

#include "otnav/generator.hpp"
#include "otnav/scenario.hpp"

namespace otnav::fixtures {

// Random grid with at most `max_free` free cells, 1-4 robots and targets,
// random connectivity and jump settings. Balanced and unbalanced mixed.
inline ScenarioSpec random_small_scenario(Rng& rng, int max_free = 9) {
  const int rows = static_cast<int>(rng.uniform_int(2, 3));
  const int cols = static_cast<int>(rng.uniform_int(3, 4));
  const int k = rows * cols;
  std::vector<CellId> cells(k);
  for (int i = 0; i < k; ++i) cells[i] = i;
  rng.shuffle(cells);
  const int min_obstacles = std::max(0, k - max_free);
  const int obstacle_count = static_cast<int>(rng.uniform_int(min_obstacles, std::min(min_obstacles + 2, k - 2)));
  std::vector<CellId> obstacles(cells.begin(), cells.begin() + obstacle_count);
  std::vector<CellId> free(cells.begin() + obstacle_count, cells.end());

  const Connectivity connectivity = static_cast<Connectivity>(rng.uniform_int(0, 2));
  ScenarioSpec s;
  s.grid = GridWorld(rows, cols, 1.0, Vec2(0.5, 0.5), obstacles, connectivity);
  const int free_count = static_cast<int>(free.size());
  const int n = static_cast<int>(rng.uniform_int(1, std::min(4, free_count - 1)));
  const int m = static_cast<int>(rng.uniform_int(1, std::min(4, free_count - n)));
  s.robots.assign(free.begin(), free.begin() + n);
  s.targets.assign(free.begin() + n, free.begin() + n + m);
  switch (rng.uniform_int(0, 3)) {
    case 0: break;
    case 1: s.cost.jump_scope = JumpScope::kFull; break;
    case 2: s.cost.jump_rule = JumpRule::kDisabled; break;
    default: s.cost.jump_radius = static_cast<int>(rng.uniform_int(1, 2)); break;
  }
  return s;
}

}  // namespace otnav::fixtures
