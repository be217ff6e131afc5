#include "dbalign/combinatorics.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <string>

#include "dbalign/error.hpp"

namespace dbalign {

namespace {

void check_k_max(int k_max) {
  if (k_max < 1 || k_max > kMaxMomentOrder)
    throw InvalidArgument("k_max must lie in [1, " + std::to_string(kMaxMomentOrder) +
                          "], got " + std::to_string(k_max));
}

const BigInt& zero() {
  static const BigInt z = 0;
  return z;
}

}  // namespace

StirlingTable::StirlingTable(int k_max) : k_max_(k_max) {
  check_k_max(k_max);
  rows_.resize(static_cast<std::size_t>(k_max) + 1);
  rows_[0] = {BigInt(1)};  // S(0,0) = 1 seeds the recurrence
  for (int k = 1; k <= k_max; ++k) {
    auto& row = rows_[static_cast<std::size_t>(k)];
    const auto& prev = rows_[static_cast<std::size_t>(k - 1)];
    row.assign(static_cast<std::size_t>(k) + 1, BigInt(0));
    for (int l = 1; l <= k; ++l) {
      BigInt v = prev[static_cast<std::size_t>(l - 1)];
      if (l <= k - 1) v += BigInt(l) * prev[static_cast<std::size_t>(l)];
      row[static_cast<std::size_t>(l)] = v;
    }
  }
}

const BigInt& StirlingTable::operator()(int k, int l) const {
  if (k < 1 || k > k_max_ || l < 1 || l > k) return zero();
  return rows_[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)];
}

BWeights::BWeights(int k_max) {
  check_k_max(k_max);
  const StirlingTable s(k_max);
  using Float = boost::multiprecision::cpp_bin_float_50;
  exact_.reserve(static_cast<std::size_t>(k_max));
  log_b_.reserve(static_cast<std::size_t>(k_max));
  for (int k = 1; k <= k_max; ++k) {
    Rational sum = 0;
    BigInt k2pow = 1;
    BigInt factorial = 1;
    const BigInt k2 = BigInt(k) * k;
    for (int l = 1; l <= k; ++l) {
      k2pow *= k2;
      factorial *= l;
      sum += Rational(s(k, l) * k2pow, factorial);
    }
    exact_.push_back(sum);
    const Float as_float = Float(boost::multiprecision::numerator(sum)) /
                           Float(boost::multiprecision::denominator(sum));
    log_b_.push_back(static_cast<double>(log(as_float)));
  }
}

const BWeights& default_b_weights() {
  static const BWeights weights(kMaxMomentOrder);
  return weights;
}

Rational exact_moment_small(int n, int alphabet, int k) {
  if (n < 1 || alphabet < 1 || k < 1) throw InvalidArgument("n, alphabet, k must be >= 1");
  if (n > 3 || alphabet > 3 || k > 5)
    throw InvalidArgument("exact moment enumeration limited to n <= 3, alphabet <= 3, k <= 5");
  const int symbols = 2 * n;
  long long outcomes = 1;
  for (int i = 0; i < symbols; ++i) outcomes *= alphabet;

  BigInt total = 0;
  std::vector<int> digits(static_cast<std::size_t>(symbols));
  for (long long code = 0; code < outcomes; ++code) {
    long long c = code;
    for (int i = 0; i < symbols; ++i) {
      digits[static_cast<std::size_t>(i)] = static_cast<int>(c % alphabet);
      c /= alphabet;
    }
    long long count = 0;
    for (int l = 0; l < n; ++l)
      for (int m = 0; m < n; ++m)
        count += digits[static_cast<std::size_t>(l)] == digits[static_cast<std::size_t>(n + m)];
    BigInt p = 1;
    for (int i = 0; i < k; ++i) p *= count;
    total += p;
  }
  return Rational(total, BigInt(outcomes));
}

}  // namespace dbalign
