#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numeric>

#include "dbalign/error.hpp"
#include "dbalign/model.hpp"
#include "dbalign/rng.hpp"

using namespace dbalign;

namespace {

double row_variance(std::span<const double> r) {
  const double mean = std::accumulate(r.begin(), r.end(), 0.0) / r.size();
  double s = 0.0;
  for (double v : r) s += (v - mean) * (v - mean);
  return s / (r.size() - 1);
}

double correlation(std::span<const double> a, std::span<const double> b) {
  const double n = a.size();
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

ModelParams params(std::size_t n, std::size_t d, double rho = 0.5) {
  ModelParams p;
  p.n = n;
  p.d = d;
  p.rho = rho;
  return p;
}

}  // namespace

TEST(Rng, StreamsAreDeterministicAndDistinct) {
  EXPECT_EQ(stream_seed(1, 0), stream_seed(1, 0));
  EXPECT_NE(stream_seed(1, 0), stream_seed(1, 1));
  EXPECT_NE(stream_seed(1, 0), stream_seed(2, 0));
  Rng a(5), b(5);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.normal(), b.normal());
}

TEST(Rng, NormalMoments) {
  Rng r(11);
  const int n = 400000;
  double s = 0, s2 = 0, s4 = 0;
  for (int i = 0; i < n; ++i) {
    const double v = r.normal();
    s += v;
    s2 += v * v;
    s4 += v * v * v * v;
  }
  EXPECT_NEAR(s / n, 0.0, 4.0 / std::sqrt(n));
  EXPECT_NEAR(s2 / n, 1.0, 4.0 * std::sqrt(2.0 / n));
  EXPECT_NEAR(s4 / n, 3.0, 4.0 * std::sqrt(96.0 / n));
}

TEST(Rng, BelowIsInRange) {
  Rng r(3);
  for (int i = 0; i < 10000; ++i) EXPECT_LT(r.below(7), 7u);
  EXPECT_EQ(r.below(1), 0u);
}

TEST(ModelParams, Validation) {
  EXPECT_NO_THROW(params(3, 2).validate());
  EXPECT_THROW(params(0, 2).validate(), InvalidArgument);
  EXPECT_THROW(params(3, 0).validate(), InvalidArgument);
  EXPECT_THROW(params(3, 2, 0.0).validate(), InvalidArgument);
  EXPECT_THROW(params(3, 2, 1.0).validate(), InvalidArgument);
  ModelParams p = params(3, 2);
  p.sigma = Permutation::identity(4);
  EXPECT_THROW(p.validate(), InvalidArgument);
  EXPECT_THROW(Permutation({0, 0, 1}), InvalidArgument);
}

TEST(SampleH0, Shapes) {
  const auto db = sample_h0(params(200, 50), 1);
  EXPECT_EQ(db.x.rows(), 200u);
  EXPECT_EQ(db.x.cols(), 50u);
  EXPECT_EQ(db.y.rows(), 200u);
  EXPECT_EQ(db.y.cols(), 50u);
}

TEST(SampleH0, RowVariance) {
  const auto db = sample_h0(params(10, 100000), 42);
  for (std::size_t i = 0; i < 10; ++i) {
    EXPECT_NEAR(row_variance(db.x.row(i)), 1.0, 0.03);
    EXPECT_NEAR(row_variance(db.y.row(i)), 1.0, 0.03);
  }
}

TEST(SampleH0, SingleRowCrossMomentAveragesToZero) {
  const int trials = 10000;
  double s = 0, s2 = 0;
  for (int t = 0; t < trials; ++t) {
    const auto db = sample_h0(params(1, 4), stream_seed(7, t));
    double dot = 0;
    for (std::size_t k = 0; k < 4; ++k) dot += db.x(0, k) * db.y(0, k);
    s += dot;
    s2 += dot * dot;
  }
  const double mean = s / trials, sd = std::sqrt(s2 / trials - mean * mean);
  EXPECT_LT(std::fabs(mean), 3.0 * sd / std::sqrt(trials));
}

TEST(SampleH1, CorrelationConverges) {
  const auto db = sample_h1(params(1, 100000, 0.5), 9);
  EXPECT_NEAR(correlation(db.x.row(0), db.y.row(0)), 0.5, 0.01);
  EXPECT_NEAR(row_variance(db.y.row(0)), 1.0, 0.03);
}

TEST(SampleH1, StrongCorrelation) {
  const auto db = sample_h1(params(5, 10000, 0.999), 3);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_GE(correlation(db.x.row(i), db.y.row(i)), 0.99);
}

TEST(SampleH1, PartnersFollowSigma) {
  ModelParams p = params(6, 20000, 0.9);
  p.sigma = Permutation({3, 0, 5, 1, 2, 4});
  const auto db = sample_h1(p, 5);
  ASSERT_TRUE(db.truth);
  EXPECT_EQ(db.truth->sigma, *p.sigma);
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_NEAR(correlation(db.x.row(i), db.y.row((*p.sigma)[i])), 0.9, 0.02);
    EXPECT_NEAR(correlation(db.x.row(i), db.y.row((*p.sigma)[(i + 1) % 6])), 0.0, 0.03);
  }
}

TEST(SampleH1, Deterministic) {
  EXPECT_EQ(sample_h1(params(20, 10), 77).y, sample_h1(params(20, 10), 77).y);
  EXPECT_FALSE(sample_h1(params(20, 10), 77).y == sample_h1(params(20, 10), 78).y);
}

TEST(ScoreTable, BasicGeometry) {
  DatabasePair db;
  db.x = Matrix(2, 3);
  db.y = Matrix(2, 3);
  db.x(0, 0) = 2; db.x(0, 1) = 1;
  db.x(1, 2) = 5;
  db.y(0, 0) = 2; db.y(0, 1) = 1;
  db.y(1, 1) = 3;
  const ScoreTable s = score_table(db);
  EXPECT_NEAR(s(0, 0), 1.0, 1e-15);
  EXPECT_EQ(s(1, 0), 0.0);
  EXPECT_EQ(s(1, 1), 0.0);
}

TEST(ScoreTable, ScaleInvariant) {
  auto db = sample_h1(params(8, 12), 4);
  const ScoreTable a = score_table(db);
  for (double& v : db.x.row(0)) v *= 17.0;
  const ScoreTable b = score_table(db);
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j) EXPECT_NEAR(a(i, j), b(i, j), 1e-14);
}

TEST(ScoreTable, EntriesBounded) {
  for (std::size_t d : {1u, 2u, 50u}) {
    const ScoreTable s = score_table(sample_h1(params(30, d, 0.9), d));
    for (double v : s.matrix().data()) {
      EXPECT_FALSE(std::isnan(v));
      EXPECT_LE(std::fabs(v), 1.0);
    }
  }
}

TEST(ScoreTable, ZeroRowIsDegenerate) {
  auto db = sample_h0(params(3, 4), 1);
  for (double& v : db.y.row(2)) v = 0.0;
  EXPECT_THROW(score_table(db), DegenerateInput);
}

TEST(RandomPermutation, Basics) {
  EXPECT_EQ(random_permutation(1, 9), Permutation::identity(1));
  EXPECT_EQ(random_permutation(50, 9), random_permutation(50, 9));
}

TEST(RandomPermutation, UniformOnS3) {
  const int draws = 60000;
  std::map<std::vector<std::size_t>, int> counts;
  for (int t = 0; t < draws; ++t) ++counts[random_permutation(3, stream_seed(123, t)).map()];
  ASSERT_EQ(counts.size(), 6u);
  double chi2 = 0;
  for (const auto& [perm, c] : counts) {
    EXPECT_NEAR(c / double(draws), 1.0 / 6.0, 0.01);
    chi2 += std::pow(c - draws / 6.0, 2) / (draws / 6.0);
  }
  EXPECT_LT(chi2, 20.5);  // 0.999 quantile of chi^2_5
}
