#pragma once

// Correlation detectors: the sum-of-inner-products test and the
// threshold-count test.

#include <cstddef>

#include "dbalign/model.hpp"

namespace dbalign {

/// Sum-of-inner-products test. Declares H1 when T >= t, t = sqrt(gamma) d n / 2.
struct SopTestConfig {
  double gamma = 0.0;
  double threshold = 0.0;

  /// gamma in (0, 4 rho^2); throws InvalidArgument otherwise.
  static SopTestConfig make(std::size_t n, std::size_t d, double gamma, double rho);
};

/// T = sum_i sum_j <X_i, Y_j> on the raw rows, computed as <sum X_i, sum Y_j>.
double sop_statistic(const DatabasePair& db);
Hypothesis sop_decide(double t_stat, const SopTestConfig& cfg);

/// Threshold-count test. Declares H1 when N(theta) >= test_beta n p_ref.
struct CountTestConfig {
  double theta = 0.5;
  double test_beta = 0.5;
  double p_ref = 1.0;

  /// Throws InvalidArgument unless test_beta in (0,1), p_ref in (0,1] and
  /// theta is finite.
  void validate() const;
  double threshold(std::size_t n) const { return test_beta * static_cast<double>(n) * p_ref; }
};

/// Builds a config with p_ref = p_prob(d, rho, theta).
CountTestConfig make_count_config(int d, double rho, double theta, double test_beta);

/// N(theta): number of entries s_ij >= theta.
std::size_t count_statistic(const ScoreTable& table, double theta);
Hypothesis count_decide(std::size_t n_stat, std::size_t n, const CountTestConfig& cfg);

}  // namespace dbalign
