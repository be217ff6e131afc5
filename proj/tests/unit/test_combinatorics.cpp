#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "dbalign/combinatorics.hpp"
#include "dbalign/error.hpp"
#include "dbalign/theory.hpp"

using namespace dbalign;

TEST(Stirling, Boundaries) {
  const StirlingTable s(64);
  for (int k = 1; k <= 64; ++k) {
    EXPECT_EQ(s(k, 1), 1);
    EXPECT_EQ(s(k, k), 1);
    EXPECT_EQ(s(k, 0), 0);
    EXPECT_EQ(s(k, k + 1), 0);
  }
}

TEST(Stirling, SmallValues) {
  const StirlingTable s(10);
  EXPECT_EQ(s(3, 2), 3);
  EXPECT_EQ(s(4, 2), 7);
  EXPECT_EQ(s(5, 3), 25);
  EXPECT_EQ(s(10, 5), 42525);
}

TEST(Stirling, RecurrenceHoldsExactly) {
  const StirlingTable s(64);
  for (int k = 2; k <= 64; ++k)
    for (int l = 2; l < k; ++l) EXPECT_EQ(s(k, l), l * s(k - 1, l) + s(k - 1, l - 1));
}

TEST(Stirling, RowSumsAreBellNumbers) {
  // Bell triangle, independent of the Stirling recurrence.
  std::vector<BigInt> bell{1};
  std::vector<BigInt> row{1};
  for (int k = 1; k <= 10; ++k) {
    std::vector<BigInt> next{row.back()};
    for (const auto& v : row) next.push_back(next.back() + v);
    bell.push_back(next.front());
    row = next;
  }
  const StirlingTable s(10);
  for (int k = 1; k <= 10; ++k) {
    BigInt sum = 0;
    for (int l = 1; l <= k; ++l) sum += s(k, l);
    EXPECT_EQ(sum, bell[k]) << k;
  }
  EXPECT_EQ(bell[10], 115975);
}

TEST(Stirling, RangeChecked) {
  EXPECT_THROW(StirlingTable(0), InvalidArgument);
  EXPECT_THROW(StirlingTable(65), InvalidArgument);
}

TEST(BWeights, SmallValues) {
  const BWeights b(5);
  EXPECT_EQ(b.exact(1), 1);
  EXPECT_EQ(b.exact(2), 12);
  // 1*9/1! + 3*81/2! + 1*729/3!
  EXPECT_EQ(b.exact(3), 252);
  EXPECT_NEAR(b.log_b(3), std::log(252.0), 1e-14);
}

TEST(BWeights, PositiveAndIncreasing) {
  const BWeights& b = default_b_weights();
  ASSERT_EQ(b.k_max(), 64);
  for (int k = 2; k <= 64; ++k) {
    EXPECT_GT(b.exact(k), b.exact(k - 1));
    EXPECT_GT(b.log_b(k), b.log_b(k - 1));
  }
  EXPECT_TRUE(std::isfinite(b.log_b(64)));
}

TEST(MomentOracle, SingleRowIsBernoulli) {
  for (int m = 1; m <= 3; ++m)
    for (int k = 1; k <= 5; ++k) {
      EXPECT_EQ(exact_moment_small(1, m, k), Rational(1, m));
      EXPECT_GE(moment_bound_rhs(1, 1.0 / m, k), 1.0 / m);
    }
}

TEST(MomentOracle, HandCountedCase) {
  // n=2, m=2: N = sum of 4 indicators; E[N] = 4 * 1/2 = 2.
  EXPECT_EQ(exact_moment_small(2, 2, 1), 2);
}

TEST(MomentOracle, DominatedByBound) {
  for (int n = 1; n <= 3; ++n)
    for (int m = 1; m <= 3; ++m)
      for (int k = 1; k <= 5; ++k) {
        const double exact = static_cast<double>(exact_moment_small(n, m, k));
        EXPECT_LE(exact, moment_bound_rhs(n, 1.0 / m, k)) << n << ' ' << m << ' ' << k;
      }
}

TEST(MomentOracle, RefusesLargeConfigurations) {
  EXPECT_THROW(exact_moment_small(4, 2, 2), InvalidArgument);
  EXPECT_THROW(exact_moment_small(2, 4, 2), InvalidArgument);
  EXPECT_THROW(exact_moment_small(2, 2, 6), InvalidArgument);
}
