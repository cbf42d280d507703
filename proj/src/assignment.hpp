#pragma once

#include <vector>

namespace spinwig {

/// Minimum-cost perfect matching on a square cost matrix (row-major, n*n),
/// Hungarian method with potentials, O(n^3). Returns the column assigned to
/// each row.
std::vector<int> solve_assignment(const std::vector<double> &cost, int n);

} // namespace spinwig
