#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "dbalign/error.hpp"
#include "dbalign/recovery.hpp"
#include "dbalign/rng.hpp"

using namespace dbalign;

namespace {

// 0/1 table with dots at the given 0-based cells.
ScoreTable dots(std::size_t n, std::initializer_list<std::pair<std::size_t, std::size_t>> cells) {
  Matrix m(n, n, 0.0);
  for (auto [i, j] : cells) m(i, j) = 1.0;
  return ScoreTable(m);
}

ScoreTable random_table(std::size_t n, std::uint64_t seed) {
  Rng r(seed);
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (double& v : m.row(i)) v = 2.0 * r.uniform() - 1.0;
  return ScoreTable(m);
}

bool is_perm(const Permutation& p, std::size_t n) {
  return p.size() == n && is_bijection(p.map());
}

using Pairs = std::vector<PartialAlignment::Pair>;

}  // namespace

TEST(PartialAlignment, EnforcesLn) {
  EXPECT_NO_THROW(PartialAlignment(3, Pairs{{0, 1}, {1, 0}}));
  EXPECT_THROW(PartialAlignment(3, Pairs{{0, 1}, {0, 2}}), InvalidArgument);
  EXPECT_THROW(PartialAlignment(3, Pairs{{0, 1}, {2, 1}}), InvalidArgument);
  EXPECT_THROW(PartialAlignment(3, Pairs{{3, 0}}), InvalidArgument);
  EXPECT_TRUE(PartialAlignment(3, {}).empty());
}

TEST(ThresholdAndClean, AlreadyClean) {
  const auto a = threshold_and_clean(dots(3, {{0, 0}, {1, 1}}), 0.5);
  EXPECT_EQ(a.pairs(), (Pairs{{0, 0}, {1, 1}}));
}

TEST(ThresholdAndClean, RowConflictErasesBoth) {
  const auto a = threshold_and_clean(dots(3, {{0, 0}, {0, 1}, {2, 2}}), 0.5);
  EXPECT_EQ(a.pairs(), (Pairs{{2, 2}}));
}

TEST(ThresholdAndClean, ColumnConflictErasesBoth) {
  EXPECT_TRUE(threshold_and_clean(dots(3, {{0, 0}, {1, 0}}), 0.5).empty());
}

TEST(ThresholdAndClean, CleaningIsOnePass) {
  // (0,0),(0,1) conflict in row 0; (1,1) shares column 1 with an erased dot
  // and is erased too, because counts come from the original dot set.
  const auto a = threshold_and_clean(dots(3, {{0, 0}, {0, 1}, {1, 1}, {2, 2}}), 0.5);
  EXPECT_EQ(a.pairs(), (Pairs{{2, 2}}));
}

TEST(ThresholdAndClean, TieCountsAsDot) {
  Matrix m(2, 2, 0.0);
  m(0, 0) = 0.5;
  EXPECT_EQ(threshold_and_clean(ScoreTable(m), 0.5).size(), 1u);
}

TEST(ThresholdAndClean, OutputAlwaysInLn) {
  Rng r(99);
  for (int t = 0; t < 10000; ++t) {
    const std::size_t n = 1 + r.below(12);
    const double density = r.uniform();
    Matrix m(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (double& v : m.row(i)) v = r.uniform() < density ? 1.0 : 0.0;
    const auto a = threshold_and_clean(ScoreTable(m), 0.5);
    ASSERT_TRUE(in_ln(n, a.pairs()));
    for (auto [i, j] : a.pairs()) ASSERT_EQ(m(i, j), 1.0);
  }
}

TEST(Hungarian, DiagonalDominant) {
  Matrix m(5, 5, 1.0);
  for (std::size_t i = 0; i < 5; ++i) m(i, i) = 5.0;
  const auto a = hungarian_max(ScoreTable(m));
  EXPECT_EQ(a.sigma, Permutation::identity(5));
  EXPECT_DOUBLE_EQ(a.objective, 25.0);
}

TEST(Hungarian, MatchesBruteForce) {
  for (std::size_t n = 1; n <= 7; ++n)
    for (int t = 0; t < 200; ++t) {
      const ScoreTable s = random_table(n, stream_seed(n, t));
      const auto h = hungarian_max(s);
      const auto b = brute_force_ml(s);
      ASSERT_TRUE(is_perm(h.sigma, n));
      ASSERT_NEAR(h.objective, b.objective, 1e-12) << "n=" << n << " t=" << t;
    }
}

TEST(Hungarian, TiedOptimaGiveOptimalValue) {
  Matrix m(2, 2, 1.0);
  const auto h = hungarian_max(ScoreTable(m));
  EXPECT_DOUBLE_EQ(h.objective, brute_force_ml(ScoreTable(m)).objective);
  Matrix k(4, 4, 0.0);
  k(0, 1) = k(1, 0) = k(0, 0) = k(1, 1) = 3.0;
  k(2, 2) = k(3, 3) = 1.0;
  EXPECT_DOUBLE_EQ(hungarian_max(ScoreTable(k)).objective, brute_force_ml(ScoreTable(k)).objective);
}

TEST(Hungarian, RejectsNonSquare) { EXPECT_THROW(hungarian_max(Matrix(2, 3)), InvalidArgument); }

TEST(BruteForce, Examples) {
  EXPECT_EQ(brute_force_ml(ScoreTable(Matrix(1, 1, 0.3))).sigma, Permutation::identity(1));
  Matrix two(2, 2, 0.0);
  two(0, 0) = two(1, 1) = 1.0;
  const auto b2 = brute_force_ml(ScoreTable(two));
  EXPECT_EQ(b2.sigma, Permutation::identity(2));
  EXPECT_EQ(b2.objective, 2.0);
  Matrix three(3, 3, 0.0);
  three(0, 1) = three(1, 0) = three(2, 2) = 9.0;
  const auto b3 = brute_force_ml(ScoreTable(three));
  EXPECT_EQ(b3.sigma, Permutation({1, 0, 2}));
  EXPECT_EQ(b3.objective, 27.0);
  EXPECT_THROW(brute_force_ml(ScoreTable(Matrix(9, 9))), InvalidArgument);
}

TEST(MaximumPath, FullFractionIsHungarian) {
  const ScoreTable s = random_table(30, 5);
  const auto mp = maximum_path(s, 1.0);
  EXPECT_EQ(mp.pairs(), PartialAlignment::from_permutation(hungarian_max(s).sigma).pairs());
}

TEST(MaximumPath, KeepsCeilOfFraction) {
  EXPECT_EQ(maximum_path(random_table(200, 6), 0.3).size(), 60u);
  EXPECT_EQ(top_count(10, 0.25), 3u);
  EXPECT_EQ(top_count(10, 0.3), 3u);
  EXPECT_EQ(top_count(7, 1e-9), 1u);
  EXPECT_THROW(top_count(10, 0.0), InvalidArgument);
  EXPECT_THROW(top_count(10, 1.5), InvalidArgument);
}

TEST(MaximumPath, TiesBrokenByRow) {
  // Identity is the unique optimum; rows 1, 2, 3 tie at 0.5 for the last slot.
  Matrix m(4, 4, -1.0);
  m(0, 0) = 0.9;
  m(1, 1) = m(2, 2) = m(3, 3) = 0.5;
  const auto mp = maximum_path(ScoreTable(m), 0.5);
  EXPECT_EQ(mp.pairs(), (Pairs{{0, 0}, {1, 1}}));
}

TEST(MaximumPath, SubsetConsistency) {
  for (int t = 0; t < 50; ++t) {
    const ScoreTable s = random_table(12, stream_seed(77, t));
    const auto ml = hungarian_max(s).sigma;
    const Permutation truth = random_permutation(12, t);
    const auto mp = evaluate_alignment(maximum_path(s, 1.0), truth);
    const auto full = evaluate_alignment(PartialAlignment::from_permutation(ml), truth);
    if (mp.err2) EXPECT_TRUE(full.err1);
  }
}

TEST(TwoStage, NoDotsIsHungarian) {
  for (int t = 0; t < 20; ++t) {
    const ScoreTable s = random_table(25, stream_seed(3, t));
    const auto ts = two_stage_full(s, 1.01);
    EXPECT_TRUE(ts.fixed.empty());
    EXPECT_EQ(ts.sigma, hungarian_max(s).sigma);
  }
}

TEST(TwoStage, AllDotsIsHungarian) {
  const ScoreTable s = random_table(6, 8);
  const auto ts = two_stage_full(s, -1.0);
  EXPECT_TRUE(ts.fixed.empty());
  EXPECT_EQ(ts.sigma, hungarian_max(s).sigma);
}

TEST(TwoStage, SolvesResidual) {
  Matrix m(3, 3, 0.0);
  m(0, 0) = 0.9;
  m(1, 2) = 0.4;
  m(2, 1) = 0.3;
  m(1, 1) = 0.1;
  const auto ts = two_stage_full(ScoreTable(m), 0.8);
  EXPECT_EQ(ts.fixed.pairs(), (Pairs{{0, 0}}));
  EXPECT_EQ(ts.residual, 2u);
  EXPECT_EQ(ts.sigma, Permutation({0, 2, 1}));
}

TEST(TwoStage, AlwaysBijectionAndKeepsFixedPairs) {
  Rng r(1234);
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = 1 + r.below(20);
    const ScoreTable s = random_table(n, stream_seed(4, t));
    const auto ts = two_stage_full(s, 2.0 * r.uniform() - 1.0);
    ASSERT_TRUE(is_perm(ts.sigma, n));
    for (auto [i, j] : ts.fixed.pairs()) ASSERT_EQ(ts.sigma[i], j);
  }
}

TEST(EvaluateAlignment, Cases) {
  const Permutation truth({2, 0, 1, 3});
  const auto full = evaluate_alignment(PartialAlignment::from_permutation(truth), truth);
  EXPECT_FALSE(full.err1);
  EXPECT_FALSE(full.err2);
  EXPECT_EQ(full.size, 4u);

  const auto partial = evaluate_alignment(PartialAlignment(4, Pairs{{0, 2}, {3, 3}}), truth);
  EXPECT_TRUE(partial.err1);
  EXPECT_FALSE(partial.err2);
  EXPECT_EQ(partial.size, 2u);

  const auto swapped = evaluate_alignment(PartialAlignment(4, Pairs{{0, 0}, {1, 2}, {2, 1}, {3, 3}}), truth);
  EXPECT_TRUE(swapped.err1);
  EXPECT_TRUE(swapped.err2);

  EXPECT_TRUE(evaluate_alignment(PartialAlignment(4, {}), truth).err1);
  EXPECT_FALSE(evaluate_alignment(PartialAlignment(4, {}), truth).err2);
}
