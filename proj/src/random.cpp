#include "cvinfer/random.hpp"

#include <cmath>

#include "cvinfer/error.hpp"

namespace cvinfer {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::array<std::uint32_t, 4> RngStream::philox(std::array<std::uint32_t, 4> c,
                                               std::array<std::uint32_t, 2> k) noexcept {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, c[0], hi0, lo0);
    mulhilo(kPhiloxM1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kPhiloxW0;
    k[1] += kPhiloxW1;
  }
  return c;
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream) noexcept
    : substream_(substream) {
  const std::uint64_t key = mix64(seed ^ mix64(stream ^ 0x5851F42D4C957F2Dull));
  key_ = {static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)};
}

void RngStream::refill() noexcept {
  buffer_ = philox({static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                    static_cast<std::uint32_t>(substream_), static_cast<std::uint32_t>(substream_ >> 32)},
                   key_);
  ++block_;
  next_ = 0;
}

RngStream::result_type RngStream::operator()() noexcept {
  if (next_ > 2) refill();
  const std::uint64_t lo = buffer_[next_];
  const std::uint64_t hi = buffer_[next_ + 1];
  next_ += 2;
  return (hi << 32) | lo;
}

double RngStream::uniform() noexcept {
  // 53 random bits shifted half a step off zero: values in (0, 1).
  return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

double std_normal(RngStream& rng) noexcept {
  // Marsaglia polar method; the second variate is discarded.
  for (;;) {
    const double u = 2.0 * rng.uniform() - 1.0;
    const double v = 2.0 * rng.uniform() - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
  }
}

double gamma(RngStream& rng, double shape, double scale) {
  if (!(shape > 0.0) || !(scale > 0.0)) throw Error(ErrorKind::InvalidParameter, "gamma needs shape, scale > 0");
  if (shape < 1.0) {
    const double g = gamma(rng, shape + 1.0, scale);
    return g * std::pow(rng.uniform(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = std_normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v * scale;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v * scale;
  }
}

double chi_square(RngStream& rng, double df) {
  if (!(df > 0.0)) throw Error(ErrorKind::InvalidParameter, "chi-square needs df > 0");
  return gamma(rng, 0.5 * df, 2.0);
}

double weibull(RngStream& rng, double shape, double scale) {
  if (!(shape > 0.0) || !(scale > 0.0)) throw Error(ErrorKind::InvalidParameter, "weibull needs shape, scale > 0");
  return scale * std::pow(-std::log(rng.uniform()), 1.0 / shape);
}

}  // namespace cvinfer
