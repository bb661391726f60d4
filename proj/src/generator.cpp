#include "otnav/generator.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <string>

#include "otnav/errors.hpp"

namespace otnav {

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw RangeError("uniform_int: empty range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(engine_());
  // Rejection sampling removes modulo bias.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return lo + static_cast<std::int64_t>(x % span);
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::vector<CellId> connected_component(const GridWorld& grid, CellId start) {
  if (!grid.in_range(start) || grid.is_obstacle(start)) return {};
  std::vector<std::uint8_t> seen(grid.cell_count(), 0);
  std::vector<CellId> out{start};
  std::queue<CellId> frontier;
  frontier.push(start);
  seen[start] = 1;
  while (!frontier.empty()) {
    const CellId cell = frontier.front();
    frontier.pop();
    for (CellId next : grid.neighbors(cell)) {
      if (seen[next]) continue;
      seen[next] = 1;
      out.push_back(next);
      frontier.push(next);
    }
  }
  std::ranges::sort(out);
  return out;
}

std::vector<CellId> largest_component(const GridWorld& grid) {
  std::vector<std::uint8_t> seen(grid.cell_count(), 0);
  std::vector<CellId> best;
  for (CellId k = 0; k < grid.cell_count(); ++k) {
    if (seen[k] || grid.is_obstacle(k)) continue;
    std::vector<CellId> component = connected_component(grid, k);
    for (CellId c : component) seen[c] = 1;
    if (component.size() > best.size()) best = std::move(component);
  }
  return best;
}

ScenarioSpec generate_scenario(const GeneratorParams& params) {
  if (params.rows < 1 || params.cols < 1) throw ConfigError("generator needs rows, cols >= 1");
  if (params.robots < 0 || params.targets < 0) throw ConfigError("robot and target counts must be >= 0");
  Rng rng(params.seed);
  const CellId k = static_cast<CellId>(params.rows) * params.cols;
  const auto budget = static_cast<std::size_t>(params.max_obstacle_fraction * k);

  std::vector<std::uint8_t> blocked(k, 0);
  std::size_t blocked_count = 0;
  for (int i = 0; i < params.obstacle_rects; ++i) {
    const int h = static_cast<int>(rng.uniform_int(1, std::max(1, std::min(params.max_rect_side, params.rows))));
    const int w = static_cast<int>(rng.uniform_int(1, std::max(1, std::min(params.max_rect_side, params.cols))));
    const int r0 = static_cast<int>(rng.uniform_int(0, params.rows - h));
    const int c0 = static_cast<int>(rng.uniform_int(0, params.cols - w));
    std::size_t added = 0;
    for (int r = r0; r < r0 + h; ++r) {
      for (int c = c0; c < c0 + w; ++c) added += blocked[r * params.cols + c] ? 0 : 1;
    }
    if (blocked_count + added > budget) continue;
    for (int r = r0; r < r0 + h; ++r) {
      for (int c = c0; c < c0 + w; ++c) blocked[r * params.cols + c] = 1;
    }
    blocked_count += added;
  }
  std::vector<CellId> obstacles;
  for (CellId c = 0; c < k; ++c) {
    if (blocked[c]) obstacles.push_back(c);
  }

  ScenarioSpec out;
  out.grid = GridWorld(params.rows, params.cols, 1.0, Vec2(0.5, 0.5), obstacles, params.connectivity);
  out.cost = params.cost;
  out.mpc = params.mpc;
  out.seed = params.seed;

  std::vector<CellId> pool;
  if (params.connected) {
    pool = largest_component(out.grid);
  } else {
    for (CellId c = 0; c < k; ++c) {
      if (out.grid.is_free(c)) pool.push_back(c);
    }
  }
  const std::size_t needed = static_cast<std::size_t>(params.robots) + params.targets;
  if (pool.size() < needed) {
    throw ConfigError("only " + std::to_string(pool.size()) + " usable free cells for " + std::to_string(needed) +
                      " robots and targets");
  }
  rng.shuffle(pool);
  out.robots.assign(pool.begin(), pool.begin() + params.robots);
  out.targets.assign(pool.begin() + params.robots, pool.begin() + static_cast<std::ptrdiff_t>(needed));
  return out;
}

}  // namespace otnav
