#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "dbalign/error.hpp"
#include "dbalign/theory.hpp"
#include "oracles.hpp"

using namespace dbalign;

TEST(QProb, Limits) {
  for (int d : {2, 5, 50, 1000}) {
    EXPECT_DOUBLE_EQ(q_prob(d, 0.0), 0.5);
    EXPECT_EQ(q_prob(d, 1.0), 0.0);
  }
}

TEST(QProb, DimensionTwoClosedForm) {
  for (int i = 1; i <= 9; ++i) EXPECT_NEAR(q_prob(2, 0.1 * i), std::acos(0.1 * i) / M_PI, 1e-12);
}

TEST(QProb, MatchesReference) {
  for (int d : {3, 10, 50, 200, 20000})
    for (double t : {0.01, 0.2, 0.5, 0.8, 0.99})
      EXPECT_NEAR(q_prob(d, t), oracle::q_prob(d, t), 1e-12);
}

TEST(QProb, RejectsBadInput) {
  EXPECT_THROW(q_prob(1, 0.5), InvalidArgument);
  EXPECT_THROW(q_prob(10, -0.1), InvalidArgument);
  EXPECT_THROW(q_prob(10, 1.1), InvalidArgument);
}

TEST(PProb, SplitPoints) {
  const auto s = p_split_points(0.7, 0.55);
  EXPECT_NEAR(s.alpha, 0.51 / 0.49, 1e-15);
  EXPECT_NEAR(s.split_beta, 0.51 / (0.49 * (1 - 0.3025)), 1e-14);
}

class PProbGrid : public ::testing::TestWithParam<std::tuple<int, double, double>> {};

TEST_P(PProbGrid, MatchesTwoDimensionalOracle) {
  const auto [d, rho, theta] = GetParam();
  const double ref = oracle::p_prob(d, rho, theta);
  const double got = p_prob(d, rho, theta);
  EXPECT_NEAR(got, ref, 1e-8 * ref + 1e-13) << "d=" << d << " rho=" << rho << " theta=" << theta;
}

INSTANTIATE_TEST_SUITE_P(Grid, PProbGrid,
                         ::testing::Combine(::testing::Values(2, 10, 50, 200),
                                            ::testing::Values(0.3, 0.6, 0.7, 0.9),
                                            ::testing::Values(0.1, 0.2, 0.5, 0.55, 0.8, 0.95)));

TEST(PProb, StrictlyDecreasingInTheta) {
  double prev = 2.0;
  for (int i = 1; i <= 9; ++i) {
    const double p = p_prob(50, 0.7, 0.1 * i);
    EXPECT_LT(p, prev);
    prev = p;
  }
}

TEST(PProb, NotBelowQOnGrid) {
  for (int d : {10, 50, 200})
    for (double rho : {0.3, 0.6, 0.9})
      for (double t : {0.2, 0.5, 0.8}) EXPECT_GE(p_prob(d, rho, t), q_prob(d, t));
}

TEST(PProb, LargeDimensionApproachesOne) { EXPECT_GE(p_prob(500, 0.7, 0.5), 0.99); }

TEST(PProb, Limits) {
  EXPECT_EQ(p_prob(50, 0.7, 1.0), 0.0);
  EXPECT_NEAR(p_prob(50, 0.7, 0.0), oracle::p_prob(50, 0.7, 1e-9), 1e-8);
}

TEST(PProb, RejectsBadInput) {
  EXPECT_THROW(p_prob(1, 0.5, 0.5), InvalidArgument);
  EXPECT_THROW(p_prob(10, 0.0, 0.5), InvalidArgument);
  EXPECT_THROW(p_prob(10, 1.0, 0.5), InvalidArgument);
  EXPECT_THROW(p_prob(10, 0.5, -0.5), InvalidArgument);
}

TEST(PProb, StarvedQuadratureReportsNumericError) {
  quad::Options tight{0.0, 1e-15, 3};
  EXPECT_THROW(p_prob(50, 0.7, 0.55, tight), NumericError);
}

// ---------------------------------------------------------------------------

TEST(Type1Bound, LinearRegimeScalesWithQ) {
  const std::size_t n = 100;
  const double q = 0.5 / (n * n);
  for (int k = 1; k <= 10; ++k)
    EXPECT_NEAR(moment_bound_rhs(n, 2 * q, k) / moment_bound_rhs(n, q, k), 2.0, 1e-12);
}

TEST(Type1Bound, PowerRegime) {
  const std::size_t n = 10;
  const double q = 0.04;  // n^2 Q = 4
  EXPECT_NEAR(moment_bound_rhs(n, q, 1), 2.0 * 4.0, 1e-12);
  EXPECT_NEAR(moment_bound_rhs(n, q, 2), 6.0 * 12.0 * 16.0, 1e-9);
  EXPECT_NEAR(moment_bound_rhs(n, q, 3), 12.0 * 252.0 * 64.0, 1e-7);
}

TEST(Type1Bound, NonIncreasingInBeta) {
  const LocalProbs pq = local_probs(50, 0.7, 0.55);
  double prev = 2.0;
  for (int i = 1; i <= 9; ++i) {
    const double b = type1_bound(200, pq, 0.1 * i).bound;
    EXPECT_LE(b, prev);
    prev = b;
  }
}

TEST(Type1Bound, MatchesDirectMinimum) {
  const LocalProbs pq{0.9, 2e-5};
  const std::size_t n = 200;
  const double beta = 0.8;
  double best = 1e300;
  int arg = 0;
  for (int k = 1; k <= 40; ++k) {
    const double v = moment_bound_rhs(n, pq.q, k) / std::pow(beta * n * pq.p, k);
    if (v < best) {
      best = v;
      arg = k;
    }
  }
  const FaBound fa = type1_bound(n, pq, beta);
  EXPECT_NEAR(fa.bound / best, 1.0, 1e-9);
  EXPECT_EQ(fa.argmin_k, arg);
}

TEST(Type1Bound, ClippedAtOneAndErrors) {
  EXPECT_EQ(type1_bound(10, LocalProbs{0.01, 0.4}, 0.5).bound, 1.0);
  EXPECT_THROW(type1_bound(10, LocalProbs{0.0, 0.1}, 0.5), InvalidArgument);
  EXPECT_THROW(type1_bound(10, LocalProbs{0.5, 0.1}, 1.0), InvalidArgument);
  EXPECT_THROW(type1_bound(10, LocalProbs{0.5, 0.1}, 0.5, 65), InvalidArgument);
}

TEST(Type2Bound, Examples) {
  EXPECT_EQ(type2_bound(200, LocalProbs{0.9, 1e-4}, 1.0), 1.0);
  const std::size_t n = 50;
  const double p = 0.8, b = 0.3;
  const double expect = std::exp(-std::min((1 - b) * (1 - b) * n * p / 2.0, (1 - b) * n / 12.0));
  EXPECT_NEAR(type2_bound(n, LocalProbs{p, 0.0}, b), expect, 1e-15);
}

TEST(Janson, SmallN) {
  const double p = 0.7, q = 0.1;
  const auto j2 = janson_quantities(2, p, q);
  EXPECT_NEAR(j2.theta_big, 4 * p * q, 1e-15);
  EXPECT_NEAR(j2.omega, 2 * p, 1e-15);
  const auto j1 = janson_quantities(1, p, q);
  EXPECT_NEAR(j1.delta, p, 1e-15);
  EXPECT_EQ(j1.theta_big, 0.0);
}

TEST(Janson, ChainInequality) {
  std::mt19937_64 gen(20261015);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const std::size_t n = 2 + gen() % 500;
    const double p = u(gen), q = u(gen) * u(gen) * u(gen);
    const auto j = janson_quantities(n, p, q);
    EXPECT_GE(j.delta * j.delta / (8 * j.theta_big + 2 * j.delta) * (1 + 1e-12),
              n * p / (16.0 * n * q + 2.0));
    EXPECT_LE(j.delta, static_cast<double>(n * n));
  }
}

TEST(RecoveryBounds, PerfectDetector) {
  EXPECT_EQ(pe1_upper(50, 1.0, 0.0), 0.0);
  EXPECT_EQ(pe1_lower(50, 1.0, 0.0), 0.0);
  EXPECT_EQ(pe2_upper(50, 1.0, 0.0), 0.0);
}

TEST(RecoveryBounds, LowerBelowUpper) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 5000; ++i) {
    const std::size_t n = 1 + gen() % 300;
    const double p = u(gen), q = std::pow(u(gen), 4);
    EXPECT_LE(pe1_lower(n, p, q), pe1_upper(n, p, q) + 1e-15);
  }
}

TEST(RecoveryBounds, Pe2NeedsTwoRows) { EXPECT_THROW(pe2_upper(1, 0.5, 0.1), InvalidArgument); }

TEST(RecoveryBounds, Pe2AtSmallDesk) {
  const LocalProbs pq = local_probs(50, 0.7, 0.55);
  EXPECT_NEAR(-std::log10(pe2_upper(200, pq.p, pq.q)), 3.0892, 3.0892 * 5e-3);
}

TEST(SopBaseline, Exponents) {
  EXPECT_NEAR(sop_g_functions(1e-12, 0.5).g_fa, 0.0, 1e-12);
  EXPECT_NEAR(sop_g_functions(3.0, 0.9).g_fa, 1.0 - std::log(1.5), 1e-14);
  EXPECT_NEAR(sop_g_functions(3.0, 0.9).g_fa, 0.59453, 1e-5);
  for (double rho : {0.3, 0.6, 0.9})
    EXPECT_NEAR(sop_g_functions(1e-14, rho).g_md, -std::log(1 - rho * rho), 1e-6);
  EXPECT_THROW(sop_g_functions(0.0, 0.5), InvalidArgument);
  EXPECT_THROW(sop_g_functions(1.0, 0.5), InvalidArgument);
  const auto b = sop_bounds(10, 20, 0.5, 0.6);
  const auto g = sop_g_functions(0.5, 0.6);
  EXPECT_NEAR(b.fa, std::exp(-10 * g.g_fa), 1e-15);
  EXPECT_NEAR(b.md, std::exp(-10 * g.g_md), 1e-15);
}

TEST(BoundReport, CsvRow) {
  const BoundReport r = evaluate_bounds(200, 50, 0.7, 0.55, 0.5);
  std::ostringstream os;
  write_bound_csv_row(os, r);
  const std::string line = os.str();
  EXPECT_EQ(std::count(line.begin(), line.end(), ','),
            std::count(bound_csv_header().begin(), bound_csv_header().end(), ','));
  EXPECT_EQ(line.rfind("200,50,0.7,0.55,0.5,", 0), 0u);
}

TEST(ThetaTuning, HitsTargetRate) {
  const double th = tune_theta_for_rate(200, 50, 0.6, 0.3);
  EXPECT_NEAR(predicted_success_rate(200, local_probs(50, 0.6, th)), 0.3, 1e-9);
  const double lo = tune_theta_for_rate(200, 50, 0.6, 0.3, ThetaBranch::Lower);
  EXPECT_LT(lo, th);
  EXPECT_NEAR(predicted_success_rate(200, local_probs(50, 0.6, lo)), 0.3, 1e-9);
  EXPECT_THROW(tune_theta_for_rate(200, 50, 0.2, 0.9), InvalidArgument);
}
