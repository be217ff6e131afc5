#pragma once

// Database model: H0/H1 generation, row normalization and the score table
// every detector and recovery algorithm consumes.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace dbalign {

enum class Hypothesis { H0, H1 };

const char* to_string(Hypothesis h) noexcept;

/// Dense row-major real matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<const double> data() const noexcept { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Bijection on {0..n-1}. perm[i] is the partner column of row i.
class Permutation {
 public:
  Permutation() = default;
  /// Throws InvalidArgument unless `map` is a bijection on {0..size-1}.
  explicit Permutation(std::vector<std::size_t> map);

  static Permutation identity(std::size_t n);

  std::size_t size() const noexcept { return map_.size(); }
  std::size_t operator[](std::size_t i) const { return map_[i]; }
  const std::vector<std::size_t>& map() const noexcept { return map_; }
  Permutation inverse() const;

  bool operator==(const Permutation&) const = default;

 private:
  std::vector<std::size_t> map_;
};

bool is_bijection(std::span<const std::size_t> map);

struct ModelParams {
  std::size_t n = 1;
  std::size_t d = 1;
  double rho = 0.5;
  /// Ground truth X_i <-> Y_{sigma_i}; identity when empty.
  std::optional<Permutation> sigma;

  /// Throws InvalidArgument on n == 0, d == 0, rho outside (0,1), or a sigma
  /// of the wrong size.
  void validate() const;
  Permutation sigma_or_identity() const;
};

struct GroundTruth {
  Permutation sigma;
  Hypothesis hypothesis = Hypothesis::H1;
};

struct DatabasePair {
  Matrix x;
  Matrix y;
  std::optional<GroundTruth> truth;

  std::size_t n() const noexcept { return x.rows(); }
  std::size_t d() const noexcept { return x.cols(); }
};

/// n x n cosine similarities s_ij = <X_i/|X_i|, Y_j/|Y_j|>.
class ScoreTable {
 public:
  ScoreTable() = default;
  /// Wraps a square matrix; throws InvalidArgument if not square.
  explicit ScoreTable(Matrix s);

  std::size_t n() const noexcept { return s_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return s_(i, j); }
  const Matrix& matrix() const noexcept { return s_; }
  double max_entry() const;
  double min_entry() const;

 private:
  Matrix s_;
};

/// Both databases i.i.d. N(0, I_d) rows. Deterministic in seed.
DatabasePair sample_h0(const ModelParams& params, std::uint64_t seed);

/// Y_{sigma_i} = rho X_i + sqrt(1 - rho^2) Z_i, Z_i independent N(0, I_d).
/// Row j of Y holds the partner of X_{sigma^{-1}(j)}.
DatabasePair sample_h1(const ModelParams& params, std::uint64_t seed);

/// Throws DegenerateInput if any row of x or y has zero norm.
ScoreTable score_table(const DatabasePair& db);

/// Uniform over S_n by Fisher-Yates. Deterministic in seed.
Permutation random_permutation(std::size_t n, std::uint64_t seed);

}  // namespace dbalign
