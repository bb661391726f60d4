#pragma once

#include <cstdint>
#include <vector>

namespace otnav {

// Dense rectangular linear assignment (Hungarian method with potentials,
// O(n^2 m)). Every row of the smaller side gets a distinct column of the
// larger side. `costs` is row-major rows x cols.
struct AssignmentResult {
  std::int64_t cost = 0;
  std::vector<int> row_to_col;  // -1 when the row is unmatched (rows > cols)
};

AssignmentResult solve_assignment(int rows, int cols, const std::vector<std::int64_t>& costs);

}  // namespace otnav
