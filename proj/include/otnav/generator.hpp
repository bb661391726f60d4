#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "otnav/scenario.hpp"

namespace otnav {

// Seeded generator with portable integer and real draws (the std
// distributions differ between standard libraries).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  // Uniform integer in [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  // Uniform real in [0, 1).
  double uniform();
  bool bernoulli(double p) { return uniform() < p; }
  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::swap(values[i - 1], values[static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(i) - 1))]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

struct GeneratorParams {
  int rows = 20;
  int cols = 30;
  int robots = 10;
  int targets = 10;
  int obstacle_rects = 8;
  int max_rect_side = 5;
  double max_obstacle_fraction = 0.25;
  // Draw robots and targets from the largest connected free region only.
  bool connected = true;
  Connectivity connectivity = Connectivity::kEight;
  CostParams cost;
  MpcConfig mpc;
  std::uint64_t seed = 0;
};

// Random rectangular obstacles, then distinct robot and target cells.
// ConfigError when there are not enough free cells.
ScenarioSpec generate_scenario(const GeneratorParams& params);

// Free cells reachable from `start` under the grid's connectivity, ascending.
std::vector<CellId> connected_component(const GridWorld& grid, CellId start);
std::vector<CellId> largest_component(const GridWorld& grid);

}  // namespace otnav
