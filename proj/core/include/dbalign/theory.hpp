#pragma once

// Closed-form and integral quantities: local detect / false-alarm
// probabilities, detection error bounds, recovery error bounds and the
// sum-of-inner-products baseline.
//
// Two different "beta"s appear in this area. `test_beta` is the detector's
// threshold fraction (declare H1 when N >= test_beta * n * P); `split_beta`
// is the upper split point (1 - rho^2) / (rho^2 (1 - theta^2)) of the P
// integral. They are unrelated.

#include <cstddef>
#include <iosfwd>
#include <string>

#include "dbalign/quadrature.hpp"

namespace dbalign {

struct LocalProbs {
  double p = 0.0;  ///< P(d, rho, theta): matched pair crosses theta
  double q = 0.0;  ///< Q(d, theta): independent pair crosses theta
};

/// Q(d, theta) = 1/2 I_{1-theta^2}((d-1)/2, 1/2), the normalized area of a
/// spherical cap with half-angle arccos(theta). d >= 2, theta in [0, 1].
double q_prob(int d, double theta);

/// Split points of the P integral.
struct PSplitPoints {
  double alpha = 0.0;       ///< (1 - rho^2) / rho^2
  double split_beta = 0.0;  ///< (1 - rho^2) / (rho^2 (1 - theta^2))
};
PSplitPoints p_split_points(double rho, double theta);

/// Default tolerances for p_prob's quadrature (relative 1e-11 per piece).
quad::Options default_p_quadrature();

/// P(d, rho, theta) = Pr{ <X~, Y~> >= theta } for a rho-correlated pair.
///
/// With U = |X|^2 / |Z|^2 ~ F(d, d) and S the cosine between X and the noise Z,
///   P = int_0^alpha Pr{S >= F2(u)} f_U(u) du
///     + int_alpha^split_beta (Pr{S <= F1(u)} + Pr{S >= F2(u)}) f_U(u) du
///     + Pr{U >= split_beta},
///   F1,2(u) = -rho (1-theta^2) sqrt(u) / sqrt(1-rho^2)
///             -/+ theta sqrt(1 - rho^2 (1-theta^2) u / (1-rho^2)).
/// Inner probabilities are cap tails (incomplete beta), the outer integrals use
/// adaptive Gauss-Kronrod with extra panels around the F(d,d) mode, and the
/// last term is the F-distribution tail I_{1/(1+b)}(d/2, d/2).
/// Throws NumericError if the quadrature cannot reach `opts`.
double p_prob(int d, double rho, double theta, const quad::Options& opts = default_p_quadrature());

LocalProbs local_probs(int d, double rho, double theta);

// ---------------------------------------------------------------------------
// Detection bounds

struct FaBound {
  double bound = 1.0;     ///< min(1, raw)
  double log_raw = 0.0;   ///< natural log of the unclipped minimum
  int argmin_k = 1;
};

/// Moment bound k(k+1) B(k) [ (n^2 Q)^k if n^2 Q >= 1 else n^2 Q ].
double moment_bound_rhs(std::size_t n, double q, int k);
double log_moment_bound_rhs(std::size_t n, double q, int k);

/// min over k in 1..k_max of moment_bound_rhs(n,Q,k) / (test_beta n P)^k,
/// evaluated in the log domain. Throws InvalidArgument if P <= 0 (the
/// detector threshold is undefined) or test_beta is outside (0, 1).
FaBound type1_bound(std::size_t n, const LocalProbs& pq, double test_beta, int k_max = 40);
FaBound type1_bound(std::size_t n, int d, double rho, double theta, double test_beta,
                    int k_max = 40);

/// exp{-min((1-b)^2 nP / (16nQ + 2), (1-b) n / 12)} with b = test_beta in (0, 1].
double type2_bound(std::size_t n, const LocalProbs& pq, double test_beta);
double type2_bound(std::size_t n, int d, double rho, double theta, double test_beta);

/// Mean, pairwise-dependence mass and neighbourhood mass of the dot count
/// under H1 for the row/column dependency graph.
struct JansonQuantities {
  double delta = 0.0;      ///< nP + n(n-1)Q
  double theta_big = 0.0;  ///< 2PQ n(n-1) + Q^2 n(n-1)(n-2)
  double omega = 0.0;      ///< 2P + (2n-4)Q
};
JansonQuantities janson_quantities(std::size_t n, double p, double q);

// ---------------------------------------------------------------------------
// Recovery bounds for Threshold-and-Clean

double pe1_upper_raw(std::size_t n, double p, double q);  ///< n(1-P) + n(n-1)Q
double pe1_upper(std::size_t n, double p, double q);      ///< clipped at 1
double pe1_lower(std::size_t n, double p, double q);
double pe2_upper_raw(std::size_t n, double p, double q);  ///< n(n-1) Q (1-P)^2 (1-Q)^(2n-4)
double pe2_upper(std::size_t n, double p, double q);      ///< clipped; n >= 2

// ---------------------------------------------------------------------------
// Sum-of-inner-products baseline, gamma in (0, 4 rho^2)

struct SopExponents {
  double g_fa = 0.0;
  double g_md = 0.0;
};
SopExponents sop_g_functions(double gamma, double rho);

struct SopBounds {
  double fa = 1.0;  ///< exp(-d G_FA / 2)
  double md = 1.0;  ///< exp(-d G_MD / 2)
};
SopBounds sop_bounds(std::size_t n, int d, double gamma, double rho);

// ---------------------------------------------------------------------------
// Reports

struct BoundReport {
  std::size_t n = 0;
  int d = 0;
  double rho = 0.0;
  double theta = 0.0;
  double test_beta = 0.0;
  double p = 0.0;
  double q = 0.0;
  double n2q = 0.0;
  FaBound fa;
  double md_bound = 1.0;
  JansonQuantities janson;
  double pe1_lower = 0.0;
  double pe1_upper = 1.0;
  double pe1_upper_raw = 0.0;
  double pe2_upper = 1.0;
  double pe2_upper_raw = 0.0;
};

/// All bounds at one parameter point. P and Q are computed once.
BoundReport evaluate_bounds(std::size_t n, int d, double rho, double theta, double test_beta,
                            int k_max = 40);
/// Same, reusing precomputed local probabilities.
BoundReport evaluate_bounds(std::size_t n, int d, double rho, double theta, double test_beta,
                            const LocalProbs& pq, int k_max = 40);

/// "n,d,rho,theta,beta,P,Q,fa_bound,argmin_k,md_bound,pe1_lo,pe1_up,pe2_up"
const std::string& bound_csv_header();
void write_bound_csv_row(std::ostream& os, const BoundReport& r);

// ---------------------------------------------------------------------------
// Tuning theta for a target output size

/// Predicted Threshold-and-Clean success rate: a matched pair survives when it
/// is a dot and the other 2(n-1) cells of its row and column are empty,
/// treated as independent: P (1 - Q)^(2(n-1)).
double predicted_success_rate(std::size_t n, const LocalProbs& pq);

enum class ThetaBranch { Lower, Upper };

/// Theta where predicted_success_rate equals `target`. The rate is unimodal in
/// theta; `branch` selects the root below or above the peak. Throws
/// InvalidArgument if the peak rate is below target.
double tune_theta_for_rate(std::size_t n, int d, double rho, double target,
                           ThetaBranch branch = ThetaBranch::Upper);

}  // namespace dbalign
