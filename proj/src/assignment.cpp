#include "otnav/assignment.hpp"

#include <limits>
#include <stdexcept>

namespace otnav {
namespace {

// Requires n <= m. Returns, for each row, its column.
std::vector<int> hungarian(int n, int m, const std::vector<std::int64_t>& a) {
  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
  // 1-based potentials; column 0 is the virtual root.
  std::vector<std::int64_t> u(n + 1, 0), v(m + 1, 0);
  std::vector<int> p(m + 1, 0), way(m + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<std::int64_t> minv(m + 1, kInf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      std::int64_t delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const std::int64_t cur = a[static_cast<std::size_t>(i0 - 1) * m + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= m; ++j) {
    if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
  }
  return row_to_col;
}

}  // namespace

AssignmentResult solve_assignment(int rows, int cols, const std::vector<std::int64_t>& costs) {
  if (rows < 0 || cols < 0 || costs.size() != static_cast<std::size_t>(rows) * cols) {
    throw std::invalid_argument("assignment cost matrix has the wrong size");
  }
  AssignmentResult result;
  result.row_to_col.assign(rows, -1);
  if (rows == 0 || cols == 0) return result;

  if (rows <= cols) {
    result.row_to_col = hungarian(rows, cols, costs);
  } else {
    std::vector<std::int64_t> transposed(costs.size());
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        transposed[static_cast<std::size_t>(c) * rows + r] = costs[static_cast<std::size_t>(r) * cols + c];
      }
    }
    const std::vector<int> col_to_row = hungarian(cols, rows, transposed);
    for (int c = 0; c < cols; ++c) result.row_to_col[col_to_row[c]] = c;
  }
  for (int r = 0; r < rows; ++r) {
    if (result.row_to_col[r] >= 0) {
      result.cost += costs[static_cast<std::size_t>(r) * cols + result.row_to_col[r]];
    }
  }
  return result;
}

}  // namespace otnav
