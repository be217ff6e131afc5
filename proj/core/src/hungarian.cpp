#include "dbalign/hungarian.hpp"

#include <algorithm>
#include <limits>
#include <vector>

#include "dbalign/error.hpp"

namespace dbalign {

Assignment hungarian_max(const Matrix& w) {
  const std::size_t n = w.rows();
  if (w.cols() != n) throw InvalidArgument("hungarian_max needs a square table");
  if (n == 0) return {Permutation{}, 0.0};

  double top = w(0, 0);
  for (const double v : w.data()) top = std::max(top, v);
  auto cost = [&](std::size_t i, std::size_t j) { return top - w(i, j); };

  // 1-based rows/cols; index 0 is the virtual root of each augmenting search.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<std::size_t> match_col(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);

  for (std::size_t i = 1; i <= n; ++i) {
    match_col[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match_col[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match_col[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match_col[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match_col[j0] = match_col[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<std::size_t> sigma(n);
  for (std::size_t j = 1; j <= n; ++j) sigma[match_col[j] - 1] = j - 1;
  double obj = 0.0;
  for (std::size_t i = 0; i < n; ++i) obj += w(i, sigma[i]);
  return {Permutation(std::move(sigma)), obj};
}

Assignment hungarian_max(const ScoreTable& table) { return hungarian_max(table.matrix()); }

}  // namespace dbalign
