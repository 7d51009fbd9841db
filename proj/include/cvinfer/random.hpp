#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace cvinfer {

/// Counter-based Philox4x32-10 stream keyed by (seed, stream, substream).
///
/// The 64-bit Philox key is derived from (seed, stream); the 128-bit counter
/// is (block index, substream). Equal keys reproduce the same sequence, and
/// streams can be created anywhere (per thread, per replication) without
/// coordination. Satisfies UniformRandomBitGenerator.
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0, std::uint64_t substream = 0) noexcept;

  result_type operator()() noexcept;

  /// Uniform draw on the open interval (0, 1).
  double uniform() noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  /// Raw Philox4x32-10 block function, exposed for known-answer tests.
  static std::array<std::uint32_t, 4> philox(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) noexcept;

 private:
  void refill() noexcept;

  std::array<std::uint32_t, 2> key_{};
  std::uint64_t block_ = 0;
  std::uint64_t substream_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int next_ = 4;
};

/// SplitMix64 finaliser; used to derive keys and combine seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

double std_normal(RngStream& rng) noexcept;
/// Gamma(shape, scale) by Marsaglia-Tsang, with the U^{1/shape} boost for shape < 1.
double gamma(RngStream& rng, double shape, double scale = 1.0);
/// Chi-square with df degrees of freedom, as Gamma(df/2, 2).
double chi_square(RngStream& rng, double df);
/// Weibull by inversion: scale * (-log U)^{1/shape}.
double weibull(RngStream& rng, double shape, double scale);

}  // namespace cvinfer
