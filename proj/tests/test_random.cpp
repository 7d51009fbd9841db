#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "cvinfer/distributions.hpp"
#include "cvinfer/random.hpp"

using namespace cvinfer;

namespace {

double ks_statistic(std::vector<double> x, auto&& cdf) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

struct Moments {
  double mean = 0.0;
  double var = 0.0;
};

template <class Draw>
Moments moments(int n, Draw&& draw) {
  double s = 0.0;
  double s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = draw();
    s += x;
    s2 += x * x;
  }
  const double m = s / n;
  return {m, (s2 - n * m * m) / (n - 1)};
}

}  // namespace

TEST_CASE("philox4x32-10 known answers") {
  using A4 = std::array<std::uint32_t, 4>;
  using A2 = std::array<std::uint32_t, 2>;
  CHECK(RngStream::philox(A4{0, 0, 0, 0}, A2{0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(RngStream::philox(A4{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, A2{0xffffffff, 0xffffffff}) ==
        A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(RngStream::philox(A4{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, A2{0xa4093822, 0x299f31d0}) ==
        A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are reproducible and distinct") {
  RngStream a(7, 3, 11);
  RngStream b(7, 3, 11);
  RngStream c(7, 3, 12);
  RngStream d(7, 4, 11);
  RngStream e(8, 3, 11);
  int same_c = 0;
  int same_d = 0;
  int same_e = 0;
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    CHECK(x == b());
    same_c += x == c();
    same_d += x == d();
    same_e += x == e();
  }
  CHECK(same_c == 0);
  CHECK(same_d == 0);
  CHECK(same_e == 0);
}

TEST_CASE("uniforms lie strictly inside (0,1) and pass KS") {
  RngStream rng(1);
  std::vector<double> u(20000);
  for (double& x : u) {
    x = rng.uniform();
    REQUIRE(x > 0.0);
    REQUIRE(x < 1.0);
  }
  // 1% critical value of the one-sample KS statistic
  CHECK(ks_statistic(u, [](double x) { return x; }) < 1.63 / std::sqrt(20000.0));
}

TEST_CASE("standard normal passes KS") {
  RngStream rng(2);
  std::vector<double> z(20000);
  for (double& x : z) x = std_normal(rng);
  CHECK(ks_statistic(z, normal_cdf) < 1.63 / std::sqrt(20000.0));
}

TEST_CASE("gamma and chi-square moments") {
  const int n = 200000;
  for (double shape : {0.3, 1.0, 1.5, 7.0, 40.0}) {
    RngStream rng(3, static_cast<std::uint64_t>(shape * 10));
    const auto m = moments(n, [&] { return gamma(rng, shape, 2.0); });
    const double mean = 2.0 * shape;
    const double var = 4.0 * shape;
    CAPTURE(shape);
    CHECK(std::abs(m.mean - mean) < 5.0 * std::sqrt(var / n));
    CHECK(std::abs(m.var - var) < 0.05 * var);
  }
  RngStream rng(4);
  const auto c = moments(n, [&] { return chi_square(rng, 3.0); });
  CHECK(std::abs(c.mean - 3.0) < 5.0 * std::sqrt(6.0 / n));
  CHECK(std::abs(c.var - 6.0) < 0.3);
}

TEST_CASE("weibull mean and cv") {
  const int n = 200000;
  const double shape = weibull_shape_for_cv(0.2);
  RngStream rng(5);
  const auto m = moments(n, [&] { return weibull(rng, shape, 30.0); });
  const double mean = 30.0 * std::exp(log_gamma(1.0 + 1.0 / shape));
  CHECK(std::abs(m.mean - mean) < 5.0 * 0.2 * mean / std::sqrt(n));
  CHECK(std::sqrt(m.var) / m.mean == doctest::Approx(0.2).epsilon(0.01));
}

TEST_CASE("invalid sampler parameters throw") {
  RngStream rng(6);
  CHECK_THROWS(gamma(rng, 0.0));
  CHECK_THROWS(gamma(rng, 1.0, -1.0));
  CHECK_THROWS(chi_square(rng, -2.0));
  CHECK_THROWS(weibull(rng, 0.0, 1.0));
}

TEST_CASE("mix64 is a bijection on samples") {
  std::vector<std::uint64_t> v;
  for (std::uint64_t i = 0; i < 1000; ++i) v.push_back(mix64(i));
  std::sort(v.begin(), v.end());
  CHECK(std::adjacent_find(v.begin(), v.end()) == v.end());
}
