#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace dbalign::quad {

struct Options {
  double abs_tol = 0.0;
  double rel_tol = 1e-11;
  std::size_t max_intervals = 4000;
};

struct Result {
  double value = 0.0;
  double abs_error = 0.0;
  std::size_t evaluations = 0;
  std::size_t intervals = 0;
};

/// Globally adaptive 7-point Gauss / 15-point Kronrod quadrature on [a, b].
/// The interval with the largest error estimate is bisected until
/// abs_error <= max(abs_tol, rel_tol * |value|). Throws NumericError carrying
/// the achieved error if max_intervals is exhausted first.
Result integrate(const std::function<double(double)>& f, double a, double b,
                 const Options& opts = {});

/// As above, starting from the panels delimited by `points` (sorted, at least
/// two entries). Useful when the integrand has a narrow peak whose location is
/// known in advance.
Result integrate(const std::function<double(double)>& f, std::span<const double> points,
                 const Options& opts = {});

}  // namespace dbalign::quad
