#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace otnav {

using CellId = std::int32_t;
using Vec2 = Eigen::Vector2d;

enum class Connectivity {
  kFour,
  kEight,
  // Eight-connected, but a diagonal step is only allowed when both cells it
  // brushes past are free.
  kEightStrict,
};

// Uniform square discretization of the workspace. Cells are numbered
// row-major; row r and column c have their center at
// origin + (c, r) * cell_size. Immutable after construction.
class GridWorld {
 public:
  GridWorld() = default;
  GridWorld(int rows, int cols, double cell_size = 1.0, Vec2 origin = Vec2(0.5, 0.5),
            std::span<const CellId> obstacles = {},
            Connectivity connectivity = Connectivity::kEight);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  CellId cell_count() const noexcept { return static_cast<CellId>(rows_) * cols_; }
  double cell_size() const noexcept { return cell_size_; }
  const Vec2& origin() const noexcept { return origin_; }
  Connectivity connectivity() const noexcept { return connectivity_; }

  bool in_range(CellId cell) const noexcept { return cell >= 0 && cell < cell_count(); }
  bool is_obstacle(CellId cell) const;
  bool is_free(CellId cell) const { return !is_obstacle(cell); }
  const std::vector<CellId>& obstacles() const noexcept { return obstacles_; }
  CellId free_count() const noexcept { return cell_count() - static_cast<CellId>(obstacles_.size()); }

  CellId index(int row, int col) const;
  int row(CellId cell) const { return cell / cols_; }
  int col(CellId cell) const { return cell % cols_; }

  // Free neighbors under the grid's connectivity, ascending by index.
  std::vector<CellId> neighbors(CellId cell) const;
  // True iff `b` is in neighbors(a). Both cells must be free.
  bool adjacent(CellId a, CellId b) const;

  int chebyshev(CellId a, CellId b) const;
  int manhattan(CellId a, CellId b) const;

  Vec2 cell_center(CellId cell) const;
  // Inverse of cell_center over the covered rectangle; RangeError outside it.
  CellId locate(const Vec2& point) const;
  bool contains(const Vec2& point) const;

  // Lower-left and upper-right corners of the covered rectangle.
  Vec2 lower_corner() const;
  Vec2 upper_corner() const;

  GridWorld with_obstacles(std::span<const CellId> obstacles) const;

  friend bool operator==(const GridWorld&, const GridWorld&) = default;

 private:
  void check(CellId cell) const;

  int rows_ = 0;
  int cols_ = 0;
  double cell_size_ = 1.0;
  Vec2 origin_ = Vec2(0.5, 0.5);
  Connectivity connectivity_ = Connectivity::kEight;
  std::vector<CellId> obstacles_;
  std::vector<std::uint8_t> blocked_;
};

std::vector<CellId> neighbors(const GridWorld& grid, CellId cell);
Vec2 cell_center(const GridWorld& grid, CellId cell);

// s×s subdivision of every cell, with the surjection back to coarse cells.
struct Refinement {
  GridWorld fine;
  int factor = 1;
  std::vector<CellId> fine_to_coarse;

  // Subcell holding the coarse cell's center point (offset s/2 in each axis).
  CellId center_subcell(CellId coarse_cell) const;
  // All s*s subcells of a coarse cell, ascending.
  std::vector<CellId> subcells(CellId coarse_cell) const;
};

Refinement refine(const GridWorld& grid, int factor);

}  // namespace otnav
