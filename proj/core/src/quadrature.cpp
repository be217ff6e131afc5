#include "dbalign/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include "dbalign/error.hpp"

namespace dbalign::quad {
namespace {

// Kronrod abscissae (positive half, descending) and weights; Gauss 7-point
// weights line up with the odd-indexed Kronrod nodes.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const std::function<double(double)>& f, double a, double b, std::size_t& evals) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double resk = fc * kWgk[7];
  double resg = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double fsum = f(c - dx) + f(c + dx);
    resk += kWgk[j] * fsum;
    if (j % 2 == 1) resg += kWg[j / 2] * fsum;
  }
  evals += 15;
  return {a, b, resk * h, std::fabs((resk - resg) * h)};
}

}  // namespace

Result integrate(const std::function<double(double)>& f, std::span<const double> points,
                 const Options& opts) {
  if (points.size() < 2) throw InvalidArgument("integrate: need at least two points");
  Result r;
  std::priority_queue<Panel> heap;
  double total = 0.0, err = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    if (!(points[i] <= points[i + 1])) throw InvalidArgument("integrate: points must be sorted");
    if (points[i] == points[i + 1]) continue;
    Panel p = gk15(f, points[i], points[i + 1], r.evaluations);
    total += p.value;
    err += p.error;
    heap.push(p);
  }
  while (!heap.empty()) {
    const double target = std::max(opts.abs_tol, opts.rel_tol * std::fabs(total));
    if (err <= target) break;
    if (heap.size() >= opts.max_intervals) {
      throw NumericError("adaptive quadrature did not converge: error estimate " +
                             std::to_string(err) + " > target " + std::to_string(target),
                         err);
    }
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      // Panel cannot be split further in double precision.
      throw NumericError("adaptive quadrature hit the resolution limit; achieved error " +
                             std::to_string(err),
                         err);
    }
    Panel left = gk15(f, worst.a, mid, r.evaluations);
    Panel right = gk15(f, mid, worst.b, r.evaluations);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum to shed the drift of the running updates.
  r.value = 0.0;
  r.abs_error = 0.0;
  r.intervals = heap.size();
  while (!heap.empty()) {
    r.value += heap.top().value;
    r.abs_error += heap.top().error;
    heap.pop();
  }
  return r;
}

Result integrate(const std::function<double(double)>& f, double a, double b,
                 const Options& opts) {
  const double pts[2] = {a, b};
  return integrate(f, std::span<const double>(pts, 2), opts);
}

}  // namespace dbalign::quad
