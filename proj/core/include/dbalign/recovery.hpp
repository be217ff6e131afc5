#pragma once

// Alignment estimators: Threshold-and-Clean, ML (Hungarian), Maximum-Path and
// the two-stage full recovery, plus the exhaustive ML oracle.

#include <cstddef>
#include <utility>
#include <vector>

#include "dbalign/hungarian.hpp"
#include "dbalign/model.hpp"

namespace dbalign {

/// A member of L_n: (row, column) pairs with distinct rows and distinct
/// columns. Indices are 0-based here; files use 1-based.
class PartialAlignment {
 public:
  using Pair = std::pair<std::size_t, std::size_t>;

  PartialAlignment() = default;
  /// Throws InvalidArgument if an index is >= n or a row/column repeats.
  PartialAlignment(std::size_t n, std::vector<Pair> pairs);
  static PartialAlignment from_permutation(const Permutation& sigma);

  std::size_t n() const noexcept { return n_; }
  std::size_t size() const noexcept { return pairs_.size(); }
  bool empty() const noexcept { return pairs_.empty(); }
  bool is_full() const noexcept { return pairs_.size() == n_; }
  const std::vector<Pair>& pairs() const noexcept { return pairs_; }

 private:
  std::size_t n_ = 0;
  std::vector<Pair> pairs_;
};

/// True iff rows are distinct, columns are distinct and all indices < n.
bool in_ln(std::size_t n, const std::vector<PartialAlignment::Pair>& pairs);

struct RecoveryOutcome {
  PartialAlignment alignment;
  std::vector<double> scores;  ///< s(i, j) for each pair, same order
  bool is_full() const noexcept { return alignment.is_full(); }
};

RecoveryOutcome with_scores(const ScoreTable& table, PartialAlignment a);

/// Dots are s_ij >= theta. A dot survives iff it is the only dot in its row
/// and the only dot in its column (counts taken once, from the full dot set).
/// Pairs come out sorted by row.
PartialAlignment threshold_and_clean(const ScoreTable& table, double theta);

/// Exhaustive maximization over S_n; n <= 8, otherwise InvalidArgument.
Assignment brute_force_ml(const ScoreTable& table);

/// Hungarian assignment, then the ceil(r n) pairs with the largest matched
/// score (ties by ascending row). r in (0, 1].
PartialAlignment maximum_path(const ScoreTable& table, double r);
/// Same, reusing a precomputed assignment.
PartialAlignment maximum_path(const ScoreTable& table, const Permutation& ml, double r);

/// Number of pairs maximum_path keeps: ceil(r n), guarded against r n landing
/// a rounding error above an integer.
std::size_t top_count(std::size_t n, double r);

struct TwoStageResult {
  Permutation sigma;
  PartialAlignment fixed;   ///< step I output
  std::size_t residual = 0; ///< size of the step II subproblem
};

/// Step I: threshold_and_clean fixes pairs. Step II: Hungarian on the
/// subtable of rows and columns left over. The union is a permutation.
TwoStageResult two_stage_full(const ScoreTable& table, double theta);

struct AlignmentErrors {
  bool err1 = false;  ///< output is not exactly {(i, sigma_i)}
  bool err2 = false;  ///< some output pair (i, j) has j != sigma_i
  std::size_t size = 0;
};

AlignmentErrors evaluate_alignment(const PartialAlignment& out, const Permutation& truth);

}  // namespace dbalign
