#pragma once

// Exact combinatorial weights behind the type-I moment bound.

#include <cstddef>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace dbalign {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline constexpr int kMaxMomentOrder = 64;

/// Stirling numbers of the second kind S(k, l), 1 <= l <= k <= k_max, built by
/// S(k,l) = l S(k-1,l) + S(k-1,l-1).
class StirlingTable {
 public:
  /// Throws InvalidArgument unless 1 <= k_max <= 64.
  explicit StirlingTable(int k_max);

  int k_max() const noexcept { return k_max_; }
  /// S(k, l); zero outside 1 <= l <= k.
  const BigInt& operator()(int k, int l) const;

 private:
  int k_max_;
  std::vector<std::vector<BigInt>> rows_;  // rows_[k][l], l = 0..k
};

/// Moment weights B(k) = sum_{l=1}^{k} S(k,l) k^{2l} / l!, k = 1..k_max.
/// Accumulated exactly as rationals; log B(k) is kept in double for the
/// log-domain bound evaluation.
class BWeights {
 public:
  explicit BWeights(int k_max);

  int k_max() const noexcept { return static_cast<int>(log_b_.size()); }
  double log_b(int k) const { return log_b_.at(static_cast<std::size_t>(k - 1)); }
  const Rational& exact(int k) const { return exact_.at(static_cast<std::size_t>(k - 1)); }

 private:
  std::vector<Rational> exact_;
  std::vector<double> log_b_;
};

/// Shared read-only weights for k <= 64, built on first use.
const BWeights& default_b_weights();

/// E[(sum_{l,m} J(X_l, Y_m))^k] for X_1..X_n, Y_1..Y_n i.i.d. uniform on an
/// alphabet of size `alphabet`, J(x,y) = 1{x = y}, by enumerating all
/// alphabet^(2n) outcomes. Refuses (InvalidArgument) beyond n <= 3,
/// alphabet <= 3, k <= 5.
Rational exact_moment_small(int n, int alphabet, int k);

}  // namespace dbalign
