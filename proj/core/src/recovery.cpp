#include "dbalign/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "dbalign/error.hpp"

namespace dbalign {

bool in_ln(std::size_t n, const std::vector<PartialAlignment::Pair>& pairs) {
  std::vector<char> row(n, 0), col(n, 0);
  for (const auto& [i, j] : pairs) {
    if (i >= n || j >= n || row[i] || col[j]) return false;
    row[i] = col[j] = 1;
  }
  return true;
}

PartialAlignment::PartialAlignment(std::size_t n, std::vector<Pair> pairs)
    : n_(n), pairs_(std::move(pairs)) {
  if (!in_ln(n_, pairs_))
    throw InvalidArgument("pairs are not a partial alignment of size " + std::to_string(n_));
}

PartialAlignment PartialAlignment::from_permutation(const Permutation& sigma) {
  std::vector<Pair> pairs(sigma.size());
  for (std::size_t i = 0; i < sigma.size(); ++i) pairs[i] = {i, sigma[i]};
  return PartialAlignment(sigma.size(), std::move(pairs));
}

RecoveryOutcome with_scores(const ScoreTable& table, PartialAlignment a) {
  RecoveryOutcome out;
  out.scores.reserve(a.size());
  for (const auto& [i, j] : a.pairs()) out.scores.push_back(table(i, j));
  out.alignment = std::move(a);
  return out;
}

PartialAlignment threshold_and_clean(const ScoreTable& table, double theta) {
  const std::size_t n = table.n();
  std::vector<std::size_t> row_dots(n, 0), col_dots(n, 0), last_col(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (table(i, j) >= theta) {
        ++row_dots[i];
        ++col_dots[j];
        last_col[i] = j;
      }
  std::vector<PartialAlignment::Pair> kept;
  for (std::size_t i = 0; i < n; ++i)
    if (row_dots[i] == 1 && col_dots[last_col[i]] == 1) kept.emplace_back(i, last_col[i]);
  return PartialAlignment(n, std::move(kept));
}

Assignment brute_force_ml(const ScoreTable& table) {
  const std::size_t n = table.n();
  if (n > 8) throw InvalidArgument("brute_force_ml refuses n > 8");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::vector<std::size_t> best = perm;
  double best_obj = -std::numeric_limits<double>::infinity();
  do {
    double obj = 0.0;
    for (std::size_t i = 0; i < n; ++i) obj += table(i, perm[i]);
    if (obj > best_obj) {
      best_obj = obj;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return {Permutation(std::move(best)), n == 0 ? 0.0 : best_obj};
}

std::size_t top_count(std::size_t n, double r) {
  if (!(r > 0.0 && r <= 1.0)) throw InvalidArgument("r must lie in (0,1]");
  const double k = std::ceil(r * static_cast<double>(n) - 1e-9);
  return std::min(n, static_cast<std::size_t>(std::max(0.0, k)));
}

PartialAlignment maximum_path(const ScoreTable& table, const Permutation& ml, double r) {
  const std::size_t n = table.n();
  if (ml.size() != n) throw InvalidArgument("assignment size does not match the table");
  const std::size_t keep = top_count(n, r);
  std::vector<std::size_t> rows(n);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  std::stable_sort(rows.begin(), rows.end(), [&](std::size_t a, std::size_t b) {
    return table(a, ml[a]) > table(b, ml[b]);
  });
  rows.resize(keep);
  std::sort(rows.begin(), rows.end());
  std::vector<PartialAlignment::Pair> pairs;
  pairs.reserve(keep);
  for (const std::size_t i : rows) pairs.emplace_back(i, ml[i]);
  return PartialAlignment(n, std::move(pairs));
}

PartialAlignment maximum_path(const ScoreTable& table, double r) {
  return maximum_path(table, hungarian_max(table).sigma, r);
}

TwoStageResult two_stage_full(const ScoreTable& table, double theta) {
  const std::size_t n = table.n();
  TwoStageResult out;
  out.fixed = threshold_and_clean(table, theta);

  std::vector<std::size_t> sigma(n, n);
  std::vector<char> col_taken(n, 0);
  for (const auto& [i, j] : out.fixed.pairs()) {
    sigma[i] = j;
    col_taken[j] = 1;
  }
  std::vector<std::size_t> free_rows, free_cols;
  for (std::size_t i = 0; i < n; ++i) {
    if (sigma[i] == n) free_rows.push_back(i);
    if (!col_taken[i]) free_cols.push_back(i);
  }
  out.residual = free_rows.size();
  if (out.residual > 0) {
    Matrix sub(out.residual, out.residual);
    for (std::size_t a = 0; a < out.residual; ++a)
      for (std::size_t b = 0; b < out.residual; ++b) sub(a, b) = table(free_rows[a], free_cols[b]);
    const Assignment res = hungarian_max(sub);
    for (std::size_t a = 0; a < out.residual; ++a) sigma[free_rows[a]] = free_cols[res.sigma[a]];
  }
  out.sigma = Permutation(std::move(sigma));
  return out;
}

AlignmentErrors evaluate_alignment(const PartialAlignment& out, const Permutation& truth) {
  if (out.n() != truth.size()) throw InvalidArgument("alignment and truth differ in n");
  AlignmentErrors e;
  e.size = out.size();
  for (const auto& [i, j] : out.pairs())
    if (truth[i] != j) e.err2 = true;
  e.err1 = e.err2 || !out.is_full();
  return e;
}

}  // namespace dbalign
