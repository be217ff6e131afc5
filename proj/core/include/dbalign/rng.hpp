#pragma once

#include <cstdint>
#include <random>

namespace dbalign {

/// SplitMix64 finalizer. Used to derive independent seeds from a master seed.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed for stream `index` of master seed `seed`. Counter-based, so trial t of
/// an experiment always sees the same stream regardless of scheduling.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) noexcept;

/// 64-bit Mersenne Twister with an explicit standard-normal sampler.
///
/// Normals come from the Marsaglia polar method: draw (u, v) uniform on
/// (-1, 1)^2 until s = u^2 + v^2 lies in (0, 1), then return
/// u * sqrt(-2 ln s / s) and cache v * sqrt(-2 ln s / s) for the next call.
/// Uniforms use the top 53 bits of one engine output. Nothing here depends on
/// the standard library's distribution implementations, so a seed reproduces
/// the same stream with any conforming toolchain.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform();
  double normal();
  /// Uniform integer in [0, bound), unbiased (rejection on the top range).
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace dbalign
