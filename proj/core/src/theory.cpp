#include "dbalign/theory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <vector>

#include "dbalign/combinatorics.hpp"
#include "dbalign/error.hpp"
#include "dbalign/special.hpp"

namespace dbalign {

namespace {

void check_dimension(int d) {
  if (d < 2) throw InvalidArgument("unsupported dimension d=" + std::to_string(d) + " (need d >= 2)");
}

void check_theta(double theta) {
  if (!(theta >= 0.0 && theta <= 1.0))
    throw InvalidArgument("theta must lie in [0,1], got " + std::to_string(theta));
}

void check_rho(double rho) {
  if (!(rho > 0.0 && rho < 1.0))
    throw InvalidArgument("rho must lie in (0,1), got " + std::to_string(rho));
}

void check_prob(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0))
    throw InvalidArgument(std::string(name) + " must lie in [0,1], got " + std::to_string(v));
}

void check_n(std::size_t n) {
  if (n == 0) throw InvalidArgument("n must be >= 1");
}

}  // namespace

double q_prob(int d, double theta) {
  check_dimension(d);
  check_theta(theta);
  if (theta == 0.0) return 0.5;
  return special::cap_tail(d, theta);
}

PSplitPoints p_split_points(double rho, double theta) {
  check_rho(rho);
  check_theta(theta);
  const double r2 = rho * rho;
  const double alpha = (1.0 - r2) / r2;
  const double one_m_t2 = (1.0 - theta) * (1.0 + theta);
  return {alpha, one_m_t2 > 0.0 ? alpha / one_m_t2 : std::numeric_limits<double>::infinity()};
}

quad::Options default_p_quadrature() {
  quad::Options o;
  o.abs_tol = 0.0;
  o.rel_tol = 1e-11;
  o.max_intervals = 4000;
  return o;
}

double p_prob(int d, double rho, double theta, const quad::Options& opts) {
  check_dimension(d);
  const PSplitPoints split = p_split_points(rho, theta);
  if (theta >= 1.0) return 0.0;

  const double half_d = 0.5 * d;
  const double log_norm = special::log_beta(half_d, half_d);
  auto density = [&](double u) {
    if (u <= 0.0) return d == 2 ? std::exp(-log_norm) : 0.0;
    return std::exp((half_d - 1.0) * std::log(u) - d * std::log1p(u) - log_norm);
  };

  const double r2 = rho * rho;
  const double one_m_r2 = 1.0 - r2;
  const double one_m_t2 = (1.0 - theta) * (1.0 + theta);
  const double slope = rho * one_m_t2 / std::sqrt(one_m_r2);
  const double curv = r2 * one_m_t2 / one_m_r2;
  auto root_term = [&](double u) { return theta * std::sqrt(std::max(0.0, 1.0 - curv * u)); };
  auto f1 = [&](double u) { return -slope * std::sqrt(u) - root_term(u); };
  auto f2 = [&](double u) { return -slope * std::sqrt(u) + root_term(u); };

  auto low_piece = [&](double u) { return special::cap_tail(d, f2(u)) * density(u); };
  auto mid_piece = [&](double u) {
    // Pr{S <= F1} = Pr{S >= -F1} by symmetry of S.
    return (special::cap_tail(d, -f1(u)) + special::cap_tail(d, f2(u))) * density(u);
  };

  // log U is roughly N(0, 4/d); add panel edges on that scale so the peak is
  // never straddled by a single coarse panel.
  auto panels = [&](double a, double b) {
    std::vector<double> pts{a};
    const double step = 2.0 / std::sqrt(static_cast<double>(d));
    for (int j = -12; j <= 12; ++j) {
      const double u = std::exp(j * step);
      if (u > a && u < b) pts.push_back(u);
    }
    pts.push_back(b);
    return pts;
  };

  double total = 0.0;
  const auto p1 = panels(0.0, split.alpha);
  total += quad::integrate(low_piece, p1, opts).value;
  if (split.split_beta > split.alpha) {
    const auto p2 = panels(split.alpha, split.split_beta);
    total += quad::integrate(mid_piece, p2, opts).value;
  }
  // Pr{U >= b} = 1 - I_{b/(1+b)}(d/2, d/2) = I_{1/(1+b)}(d/2, d/2).
  total += special::ibeta(half_d, half_d, 1.0 / (1.0 + split.split_beta));
  return std::clamp(total, 0.0, 1.0);
}

LocalProbs local_probs(int d, double rho, double theta) {
  return {p_prob(d, rho, theta), q_prob(d, theta)};
}

// ---------------------------------------------------------------------------

double log_moment_bound_rhs(std::size_t n, double q, int k) {
  check_n(n);
  check_prob(q, "Q");
  const auto& weights = default_b_weights();
  if (k < 1 || k > weights.k_max()) throw InvalidArgument("k out of range");
  const double n2q = static_cast<double>(n) * static_cast<double>(n) * q;
  const double log_bracket = n2q >= 1.0 ? k * std::log(n2q) : std::log(n2q);
  return std::log(static_cast<double>(k) * (k + 1)) + weights.log_b(k) + log_bracket;
}

double moment_bound_rhs(std::size_t n, double q, int k) {
  return std::exp(log_moment_bound_rhs(n, q, k));
}

FaBound type1_bound(std::size_t n, const LocalProbs& pq, double test_beta, int k_max) {
  check_n(n);
  check_prob(pq.p, "P");
  check_prob(pq.q, "Q");
  if (!(test_beta > 0.0 && test_beta < 1.0))
    throw InvalidArgument("test_beta must lie in (0,1)");
  if (!(pq.p > 0.0)) throw InvalidArgument("undefined threshold: P = 0 makes test_beta*n*P vanish");
  if (k_max < 1 || k_max > kMaxMomentOrder) throw InvalidArgument("k_max must lie in [1,64]");

  FaBound out;
  if (pq.q == 0.0) {
    out.bound = 0.0;
    out.log_raw = -std::numeric_limits<double>::infinity();
    out.argmin_k = 1;
    return out;
  }
  const double log_threshold = std::log(test_beta * static_cast<double>(n) * pq.p);
  double best = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= k_max; ++k) {
    const double v = log_moment_bound_rhs(n, pq.q, k) - k * log_threshold;
    if (v < best) {
      best = v;
      out.argmin_k = k;
    }
  }
  out.log_raw = best;
  out.bound = best >= 0.0 ? 1.0 : std::exp(best);
  return out;
}

FaBound type1_bound(std::size_t n, int d, double rho, double theta, double test_beta, int k_max) {
  return type1_bound(n, local_probs(d, rho, theta), test_beta, k_max);
}

double type2_bound(std::size_t n, const LocalProbs& pq, double test_beta) {
  check_n(n);
  check_prob(pq.p, "P");
  check_prob(pq.q, "Q");
  if (!(test_beta > 0.0 && test_beta <= 1.0))
    throw InvalidArgument("test_beta must lie in (0,1]");
  const double nn = static_cast<double>(n);
  const double slack = 1.0 - test_beta;
  const double a = slack * slack * nn * pq.p / (16.0 * nn * pq.q + 2.0);
  const double b = slack * nn / 12.0;
  return std::exp(-std::min(a, b));
}

double type2_bound(std::size_t n, int d, double rho, double theta, double test_beta) {
  return type2_bound(n, local_probs(d, rho, theta), test_beta);
}

JansonQuantities janson_quantities(std::size_t n, double p, double q) {
  check_n(n);
  check_prob(p, "P");
  check_prob(q, "Q");
  const double nn = static_cast<double>(n);
  JansonQuantities j;
  j.delta = nn * p + nn * (nn - 1.0) * q;
  j.theta_big = 2.0 * p * q * nn * (nn - 1.0) + q * q * nn * (nn - 1.0) * (nn - 2.0);
  j.omega = 2.0 * p + (2.0 * nn - 4.0) * q;
  return j;
}

// ---------------------------------------------------------------------------

double pe1_upper_raw(std::size_t n, double p, double q) {
  check_n(n);
  check_prob(p, "P");
  check_prob(q, "Q");
  const double nn = static_cast<double>(n);
  return nn * (1.0 - p) + nn * (nn - 1.0) * q;
}

double pe1_upper(std::size_t n, double p, double q) {
  return std::min(1.0, pe1_upper_raw(n, p, q));
}

double pe1_lower(std::size_t n, double p, double q) {
  const double mass = pe1_upper_raw(n, p, q);
  const double denom = std::max(p, 1.0 - q) + mass;
  return denom > 0.0 ? mass / denom : 0.0;
}

double pe2_upper_raw(std::size_t n, double p, double q) {
  check_prob(p, "P");
  check_prob(q, "Q");
  if (n < 2) throw InvalidArgument("pe2_upper requires n >= 2");
  const double nn = static_cast<double>(n);
  const double miss = 1.0 - p;
  return nn * (nn - 1.0) * q * miss * miss * std::pow(1.0 - q, 2.0 * nn - 4.0);
}

double pe2_upper(std::size_t n, double p, double q) {
  return std::min(1.0, pe2_upper_raw(n, p, q));
}

// ---------------------------------------------------------------------------

SopExponents sop_g_functions(double gamma, double rho) {
  check_rho(rho);
  if (!(gamma > 0.0 && gamma < 4.0 * rho * rho))
    throw InvalidArgument("gamma must lie in (0, 4 rho^2)");
  const double r2 = rho * rho;
  const double c = 1.0 - r2;
  const double s1 = std::sqrt(1.0 + gamma);
  const double s2 = std::sqrt(c * c + gamma);
  SopExponents g;
  g.g_fa = s1 - 1.0 - std::log(0.5 * (1.0 + s1));
  g.g_md = (s2 - std::sqrt(r2 * gamma)) / c - 1.0 - std::log(0.5 * (c + s2));
  return g;
}

SopBounds sop_bounds(std::size_t n, int d, double gamma, double rho) {
  check_n(n);
  if (d < 1) throw InvalidArgument("d must be >= 1");
  const SopExponents g = sop_g_functions(gamma, rho);
  return {std::exp(-0.5 * d * g.g_fa), std::exp(-0.5 * d * g.g_md)};
}

// ---------------------------------------------------------------------------

BoundReport evaluate_bounds(std::size_t n, int d, double rho, double theta, double test_beta,
                            const LocalProbs& pq, int k_max) {
  BoundReport r;
  r.n = n;
  r.d = d;
  r.rho = rho;
  r.theta = theta;
  r.test_beta = test_beta;
  r.p = pq.p;
  r.q = pq.q;
  r.n2q = static_cast<double>(n) * static_cast<double>(n) * pq.q;
  r.fa = type1_bound(n, pq, test_beta, k_max);
  r.md_bound = type2_bound(n, pq, test_beta);
  r.janson = janson_quantities(n, pq.p, pq.q);
  r.pe1_lower = pe1_lower(n, pq.p, pq.q);
  r.pe1_upper_raw = pe1_upper_raw(n, pq.p, pq.q);
  r.pe1_upper = std::min(1.0, r.pe1_upper_raw);
  if (n >= 2) {
    r.pe2_upper_raw = pe2_upper_raw(n, pq.p, pq.q);
    r.pe2_upper = std::min(1.0, r.pe2_upper_raw);
  } else {
    // A single pair cannot be mismatched.
    r.pe2_upper_raw = 0.0;
    r.pe2_upper = 0.0;
  }
  return r;
}

BoundReport evaluate_bounds(std::size_t n, int d, double rho, double theta, double test_beta,
                            int k_max) {
  return evaluate_bounds(n, d, rho, theta, test_beta, local_probs(d, rho, theta), k_max);
}

const std::string& bound_csv_header() {
  static const std::string h =
      "n,d,rho,theta,beta,P,Q,fa_bound,argmin_k,md_bound,pe1_lo,pe1_up,pe2_up";
  return h;
}

void write_bound_csv_row(std::ostream& os, const BoundReport& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%zu,%d,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%d,%.10g,%.10g,%.10g,%.10g",
                r.n, r.d, r.rho, r.theta, r.test_beta, r.p, r.q, r.fa.bound, r.fa.argmin_k,
                r.md_bound, r.pe1_lower, r.pe1_upper, r.pe2_upper);
  os << buf << '\n';
}

// ---------------------------------------------------------------------------

double predicted_success_rate(std::size_t n, const LocalProbs& pq) {
  check_n(n);
  return pq.p * std::pow(1.0 - pq.q, 2.0 * (static_cast<double>(n) - 1.0));
}

double tune_theta_for_rate(std::size_t n, int d, double rho, double target, ThetaBranch branch) {
  check_n(n);
  if (!(target > 0.0 && target < 1.0)) throw InvalidArgument("target rate must lie in (0,1)");
  auto rate = [&](double theta) { return predicted_success_rate(n, local_probs(d, rho, theta)); };

  // Coarse scan for the peak, then bisection on the requested side.
  constexpr int kGrid = 200;
  double peak_theta = 0.0, peak_rate = -1.0;
  for (int i = 1; i < kGrid; ++i) {
    const double t = static_cast<double>(i) / kGrid;
    const double r = rate(t);
    if (r > peak_rate) {
      peak_rate = r;
      peak_theta = t;
    }
  }
  if (peak_rate < target)
    throw InvalidArgument("target success rate " + std::to_string(target) +
                          " exceeds the attainable peak " + std::to_string(peak_rate));
  double lo, hi;
  if (branch == ThetaBranch::Upper) {
    lo = peak_theta;
    hi = 1.0;  // rate(1) = 0
  } else {
    lo = 0.0;  // rate(0) < rate(peak) for n >= 2; for n == 1 the rate is P, which decreases
    hi = peak_theta;
    if (rate(lo) >= target) return lo;
  }
  const bool increasing = branch == ThetaBranch::Lower;
  for (int it = 0; it < 60 && hi - lo > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    const bool above = rate(mid) >= target;
    if (above == increasing) hi = mid; else lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace dbalign
