#include "dbalign/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "dbalign/error.hpp"
#include "dbalign/rng.hpp"

namespace dbalign {

const char* to_string(Hypothesis h) noexcept { return h == Hypothesis::H0 ? "H0" : "H1"; }

bool is_bijection(std::span<const std::size_t> map) {
  std::vector<char> seen(map.size(), 0);
  for (std::size_t v : map) {
    if (v >= map.size() || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

Permutation::Permutation(std::vector<std::size_t> map) : map_(std::move(map)) {
  if (!is_bijection(map_)) throw InvalidArgument("permutation is not a bijection");
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<std::size_t> m(n);
  std::iota(m.begin(), m.end(), std::size_t{0});
  return Permutation(std::move(m));
}

Permutation Permutation::inverse() const {
  std::vector<std::size_t> inv(map_.size());
  for (std::size_t i = 0; i < map_.size(); ++i) inv[map_[i]] = i;
  return Permutation(std::move(inv));
}

void ModelParams::validate() const {
  if (n == 0) throw InvalidArgument("n must be >= 1");
  if (d == 0) throw InvalidArgument("d must be >= 1");
  if (!(rho > 0.0 && rho < 1.0))
    throw InvalidArgument("rho must lie in (0,1), got " + std::to_string(rho));
  if (sigma && sigma->size() != n)
    throw InvalidArgument("sigma has size " + std::to_string(sigma->size()) +
                          ", expected " + std::to_string(n));
}

Permutation ModelParams::sigma_or_identity() const {
  return sigma ? *sigma : Permutation::identity(n);
}

ScoreTable::ScoreTable(Matrix s) : s_(std::move(s)) {
  if (s_.rows() != s_.cols()) throw InvalidArgument("score table must be square");
}

double ScoreTable::max_entry() const {
  auto d = s_.data();
  return d.empty() ? -1.0 : *std::max_element(d.begin(), d.end());
}

double ScoreTable::min_entry() const {
  auto d = s_.data();
  return d.empty() ? 1.0 : *std::min_element(d.begin(), d.end());
}

namespace {

void fill_normal(Matrix& m, Rng& rng) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (double& v : m.row(i)) v = rng.normal();
}

void check_shape(const ModelParams& params) {
  if (params.n == 0) throw InvalidArgument("n must be >= 1");
  if (params.d == 0) throw InvalidArgument("d must be >= 1");
}

}  // namespace

DatabasePair sample_h0(const ModelParams& params, std::uint64_t seed) {
  check_shape(params);
  if (params.sigma && params.sigma->size() != params.n)
    throw InvalidArgument("sigma size does not match n");
  Rng rng(seed);
  DatabasePair db{Matrix(params.n, params.d), Matrix(params.n, params.d), std::nullopt};
  fill_normal(db.x, rng);
  fill_normal(db.y, rng);
  db.truth = GroundTruth{params.sigma_or_identity(), Hypothesis::H0};
  return db;
}

DatabasePair sample_h1(const ModelParams& params, std::uint64_t seed) {
  params.validate();
  Rng rng(seed);
  const Permutation sigma = params.sigma_or_identity();
  const double c = std::sqrt(1.0 - params.rho * params.rho);
  DatabasePair db{Matrix(params.n, params.d), Matrix(params.n, params.d), std::nullopt};
  fill_normal(db.x, rng);
  for (std::size_t i = 0; i < params.n; ++i) {
    auto xi = db.x.row(i);
    auto yj = db.y.row(sigma[i]);
    for (std::size_t k = 0; k < params.d; ++k) yj[k] = params.rho * xi[k] + c * rng.normal();
  }
  db.truth = GroundTruth{sigma, Hypothesis::H1};
  return db;
}

namespace {

Matrix normalized_rows(const Matrix& m, const char* name) {
  Matrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto src = m.row(i);
    double ss = 0.0;
    for (double v : src) ss += v * v;
    if (!(ss > 0.0) || !std::isfinite(ss))
      throw DegenerateInput(std::string("row ") + std::to_string(i + 1) + " of " + name +
                            " has zero or non-finite norm");
    const double inv = 1.0 / std::sqrt(ss);
    auto dst = out.row(i);
    for (std::size_t k = 0; k < src.size(); ++k) dst[k] = src[k] * inv;
  }
  return out;
}

}  // namespace

ScoreTable score_table(const DatabasePair& db) {
  if (db.x.rows() != db.y.rows() || db.x.cols() != db.y.cols())
    throw InvalidArgument("x and y must have identical dimensions");
  const Matrix xn = normalized_rows(db.x, "x");
  const Matrix yn = normalized_rows(db.y, "y");
  const std::size_t n = xn.rows();
  Matrix s(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    auto xi = xn.row(i);
    for (std::size_t j = 0; j < n; ++j) {
      auto yj = yn.row(j);
      double dot = 0.0;
      for (std::size_t k = 0; k < xi.size(); ++k) dot += xi[k] * yj[k];
      s(i, j) = std::clamp(dot, -1.0, 1.0);
    }
  }
  return ScoreTable(std::move(s));
}

Permutation random_permutation(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw InvalidArgument("n must be >= 1");
  Rng rng(seed);
  std::vector<std::size_t> m(n);
  std::iota(m.begin(), m.end(), std::size_t{0});
  for (std::size_t i = n - 1; i > 0; --i) std::swap(m[i], m[rng.below(i + 1)]);
  return Permutation(std::move(m));
}

}  // namespace dbalign
