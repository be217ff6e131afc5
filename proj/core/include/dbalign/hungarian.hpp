#pragma once

#include "dbalign/model.hpp"

namespace dbalign {

struct Assignment {
  Permutation sigma;
  double objective = 0.0;  ///< sum_i s(i, sigma_i)
};

/// Maximum-weight perfect matching on a square table, O(n^3). Solved as the
/// minimum-cost problem on max_entry - s_ij with shortest augmenting paths
/// and dual potentials (exact, no epsilon scaling).
Assignment hungarian_max(const ScoreTable& table);

/// Same, on an arbitrary square matrix.
Assignment hungarian_max(const Matrix& weights);

}  // namespace dbalign
