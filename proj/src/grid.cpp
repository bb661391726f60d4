#include "otnav/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "otnav/errors.hpp"

namespace otnav {

GridWorld::GridWorld(int rows, int cols, double cell_size, Vec2 origin,
                     std::span<const CellId> obstacles, Connectivity connectivity)
    : rows_(rows), cols_(cols), cell_size_(cell_size), origin_(origin), connectivity_(connectivity) {
  if (rows < 1 || cols < 1) {
    throw RangeError("grid needs at least one row and one column, got " + std::to_string(rows) +
                     "x" + std::to_string(cols));
  }
  if (!(cell_size > 0.0) || !std::isfinite(cell_size)) {
    throw RangeError("cell_size must be positive and finite");
  }
  blocked_.assign(static_cast<std::size_t>(cell_count()), 0);
  for (CellId cell : obstacles) {
    if (!in_range(cell)) {
      throw RangeError("obstacle cell " + std::to_string(cell) + " out of range");
    }
    blocked_[cell] = 1;
  }
  for (CellId cell = 0; cell < cell_count(); ++cell) {
    if (blocked_[cell]) obstacles_.push_back(cell);
  }
}

void GridWorld::check(CellId cell) const {
  if (!in_range(cell)) {
    throw RangeError("cell " + std::to_string(cell) + " out of range [0, " +
                     std::to_string(cell_count()) + ")");
  }
}

bool GridWorld::is_obstacle(CellId cell) const {
  check(cell);
  return blocked_[cell] != 0;
}

CellId GridWorld::index(int row, int col) const {
  if (row < 0 || row >= rows_ || col < 0 || col >= cols_) {
    throw RangeError("(" + std::to_string(row) + ", " + std::to_string(col) + ") outside " +
                     std::to_string(rows_) + "x" + std::to_string(cols_) + " grid");
  }
  return static_cast<CellId>(row) * cols_ + col;
}

std::vector<CellId> GridWorld::neighbors(CellId cell) const {
  check(cell);
  std::vector<CellId> out;
  const int r = row(cell);
  const int c = col(cell);
  auto free_at = [&](int rr, int cc) {
    return rr >= 0 && rr < rows_ && cc >= 0 && cc < cols_ && !blocked_[rr * cols_ + cc];
  };
  for (int dr = -1; dr <= 1; ++dr) {
    for (int dc = -1; dc <= 1; ++dc) {
      if (dr == 0 && dc == 0) continue;
      const bool diagonal = dr != 0 && dc != 0;
      if (diagonal && connectivity_ == Connectivity::kFour) continue;
      if (!free_at(r + dr, c + dc)) continue;
      if (diagonal && connectivity_ == Connectivity::kEightStrict &&
          !(free_at(r + dr, c) && free_at(r, c + dc))) {
        continue;
      }
      out.push_back((r + dr) * cols_ + (c + dc));
    }
  }
  // Offsets were visited row by row, so the list is already ascending.
  return out;
}

bool GridWorld::adjacent(CellId a, CellId b) const {
  check(a);
  check(b);
  if (a == b || blocked_[a] || blocked_[b]) return false;
  const int dr = row(b) - row(a);
  const int dc = col(b) - col(a);
  if (std::abs(dr) > 1 || std::abs(dc) > 1) return false;
  if (dr == 0 || dc == 0) return true;
  switch (connectivity_) {
    case Connectivity::kFour:
      return false;
    case Connectivity::kEight:
      return true;
    case Connectivity::kEightStrict:
      return !blocked_[row(a) * cols_ + col(b)] && !blocked_[row(b) * cols_ + col(a)];
  }
  return false;
}

int GridWorld::chebyshev(CellId a, CellId b) const {
  check(a);
  check(b);
  return std::max(std::abs(row(a) - row(b)), std::abs(col(a) - col(b)));
}

int GridWorld::manhattan(CellId a, CellId b) const {
  check(a);
  check(b);
  return std::abs(row(a) - row(b)) + std::abs(col(a) - col(b));
}

Vec2 GridWorld::cell_center(CellId cell) const {
  check(cell);
  return origin_ + cell_size_ * Vec2(col(cell), row(cell));
}

Vec2 GridWorld::lower_corner() const { return origin_ - Vec2::Constant(0.5 * cell_size_); }

Vec2 GridWorld::upper_corner() const {
  return origin_ + cell_size_ * Vec2(cols_ - 0.5, rows_ - 0.5);
}

bool GridWorld::contains(const Vec2& point) const {
  const Vec2 lo = lower_corner();
  const Vec2 hi = upper_corner();
  return point.x() >= lo.x() && point.x() <= hi.x() && point.y() >= lo.y() && point.y() <= hi.y();
}

CellId GridWorld::locate(const Vec2& point) const {
  if (!contains(point)) {
    throw RangeError("point (" + std::to_string(point.x()) + ", " + std::to_string(point.y()) +
                     ") lies outside the grid");
  }
  const Vec2 rel = (point - lower_corner()) / cell_size_;
  const int c = std::min(cols_ - 1, static_cast<int>(std::floor(rel.x())));
  const int r = std::min(rows_ - 1, static_cast<int>(std::floor(rel.y())));
  return static_cast<CellId>(r) * cols_ + c;
}

GridWorld GridWorld::with_obstacles(std::span<const CellId> obstacles) const {
  return GridWorld(rows_, cols_, cell_size_, origin_, obstacles, connectivity_);
}

std::vector<CellId> neighbors(const GridWorld& grid, CellId cell) { return grid.neighbors(cell); }

Vec2 cell_center(const GridWorld& grid, CellId cell) { return grid.cell_center(cell); }

CellId Refinement::center_subcell(CellId coarse_cell) const {
  const int coarse_cols = fine.cols() / factor;
  const int r = coarse_cell / coarse_cols;
  const int c = coarse_cell % coarse_cols;
  return fine.index(r * factor + factor / 2, c * factor + factor / 2);
}

std::vector<CellId> Refinement::subcells(CellId coarse_cell) const {
  const int coarse_cols = fine.cols() / factor;
  const int r = coarse_cell / coarse_cols;
  const int c = coarse_cell % coarse_cols;
  std::vector<CellId> out;
  out.reserve(static_cast<std::size_t>(factor) * factor);
  for (int dr = 0; dr < factor; ++dr) {
    for (int dc = 0; dc < factor; ++dc) {
      out.push_back(fine.index(r * factor + dr, c * factor + dc));
    }
  }
  return out;
}

Refinement refine(const GridWorld& grid, int factor) {
  if (factor < 1) {
    throw RangeError("subdivision factor must be >= 1, got " + std::to_string(factor));
  }
  const int rows = grid.rows() * factor;
  const int cols = grid.cols() * factor;
  const double size = grid.cell_size() / factor;
  const Vec2 origin = grid.lower_corner() + Vec2::Constant(0.5 * size);

  std::vector<CellId> map(static_cast<std::size_t>(rows) * cols);
  std::vector<CellId> blocked;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const CellId coarse = grid.index(r / factor, c / factor);
      const CellId fine = static_cast<CellId>(r) * cols + c;
      map[fine] = coarse;
      if (grid.is_obstacle(coarse)) blocked.push_back(fine);
    }
  }
  return Refinement{GridWorld(rows, cols, size, origin, blocked, grid.connectivity()), factor,
                    std::move(map)};
}

}  // namespace otnav
