#include "dbalign/detectors.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "dbalign/error.hpp"
#include "dbalign/theory.hpp"

namespace dbalign {

SopTestConfig SopTestConfig::make(std::size_t n, std::size_t d, double gamma, double rho) {
  if (!(rho > 0.0 && rho < 1.0)) throw InvalidArgument("rho must lie in (0,1)");
  if (!(gamma > 0.0 && gamma < 4.0 * rho * rho))
    throw InvalidArgument("gamma must lie in (0, 4 rho^2), got " + std::to_string(gamma));
  if (n == 0 || d == 0) throw InvalidArgument("n and d must be positive");
  return {gamma, std::sqrt(gamma) * static_cast<double>(d) * static_cast<double>(n) / 2.0};
}

double sop_statistic(const DatabasePair& db) {
  const std::size_t n = db.x.rows(), d = db.x.cols();
  if (db.y.rows() != n || db.y.cols() != d) throw InvalidArgument("x and y differ in shape");
  std::vector<double> sx(d, 0.0), sy(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto xr = db.x.row(i);
    const auto yr = db.y.row(i);
    for (std::size_t k = 0; k < d; ++k) {
      sx[k] += xr[k];
      sy[k] += yr[k];
    }
  }
  double t = 0.0;
  for (std::size_t k = 0; k < d; ++k) t += sx[k] * sy[k];
  return t;
}

Hypothesis sop_decide(double t_stat, const SopTestConfig& cfg) {
  return t_stat >= cfg.threshold ? Hypothesis::H1 : Hypothesis::H0;
}

void CountTestConfig::validate() const {
  if (!std::isfinite(theta)) throw InvalidArgument("theta must be finite");
  if (!(test_beta > 0.0 && test_beta < 1.0)) throw InvalidArgument("test_beta must lie in (0,1)");
  if (!(p_ref > 0.0 && p_ref <= 1.0)) throw InvalidArgument("p_ref must lie in (0,1]");
}

CountTestConfig make_count_config(int d, double rho, double theta, double test_beta) {
  CountTestConfig cfg{theta, test_beta, p_prob(d, rho, theta)};
  if (!(cfg.p_ref > 0.0)) throw InvalidArgument("undefined threshold: P(d,rho,theta) = 0");
  cfg.validate();
  return cfg;
}

std::size_t count_statistic(const ScoreTable& table, double theta) {
  std::size_t c = 0;
  for (const double s : table.matrix().data())
    if (s >= theta) ++c;
  return c;
}

Hypothesis count_decide(std::size_t n_stat, std::size_t n, const CountTestConfig& cfg) {
  return static_cast<double>(n_stat) >= cfg.threshold(n) ? Hypothesis::H1 : Hypothesis::H0;
}

}  // namespace dbalign
