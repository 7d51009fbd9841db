#include <doctest.h>

#include <cmath>

#include "cvinfer/error.hpp"
#include "cvinfer/fixtures.hpp"
#include "cvinfer/gpv.hpp"
#include "cvinfer/model.hpp"
#include "cvinfer/mslr.hpp"
#include "helpers.hpp"

using namespace cvinfer;

namespace {

Dataset single_group(double mean, double sd) { return Dataset({summary_from_moments(4, mean, sd)}); }

}  // namespace

TEST_CASE("type-7 quantiles") {
  const std::vector<double> x{1, 2, 3, 4, 5};
  CHECK(quantile_type7(x, 0.0) == 1.0);
  CHECK(quantile_type7(x, 1.0) == 5.0);
  CHECK(quantile_type7(x, 0.5) == 3.0);
  CHECK(quantile_type7(x, 0.2) == doctest::Approx(1.8));
  CHECK(quantile_type7(x, 0.8) == doctest::Approx(4.2));
  CHECK_THROWS_AS(quantile_type7({}, 0.5), Error);
}

TEST_CASE("percentile interval on a fixed sample") {
  PivotalSample s{Method::GV2, {5, 3, 1, 4, 2}};
  const auto ci = percentile_interval(s, 0.6);
  CHECK(ci.lower == doctest::Approx(1.8));
  CHECK(ci.upper == doctest::Approx(4.2));
  CHECK(ci.method == Method::GV2);
  CHECK(*ci.draws == 5);
  CHECK(generalized_pvalue(s, 2.5) == doctest::Approx(0.8));
  CHECK(generalized_pvalue(s, 10.0) == 0.0);
  CHECK(generalized_pvalue(s, 3.0) == doctest::Approx(0.8));
}

TEST_CASE("pivotal values for hand-computed inputs") {
  // n = 4, xbar/s = 2, U = 3 = n - 1 so sqrt(U/(n-1)) = 1
  const auto d = single_group(2.0, 1.0);
  const std::vector<double> u{3.0};
  CHECK(draw_gv1(d, u, std::vector<double>{0.0}, Gv1Variant::SqrtN) == doctest::Approx(0.5));
  CHECK(draw_gv2(d, u, 0.0) == doctest::Approx(0.5));
  // Z = 2: sqrt-n gives R = 2 - 2/2 = 1, as-printed R = 2 - 2/4 = 1.5
  CHECK(draw_gv1(d, u, std::vector<double>{2.0}, Gv1Variant::SqrtN) == doctest::Approx(1.0));
  CHECK(draw_gv1(d, u, std::vector<double>{2.0}, Gv1Variant::AsPrinted) == doctest::Approx(1.0 / 1.5));
  // G2 denominator 4*2 - 2*2 = 4
  CHECK(draw_gv2(d, u, 2.0) == doctest::Approx(1.0));
  CHECK(draw_gv3(1.0, 0.5) == 0.75);
  CHECK_THROWS_AS(draw_gv2(d, u, 4.0), Error);
  CHECK_THROWS_AS(draw_gv1(d, u, std::vector<double>{4.0}, Gv1Variant::SqrtN), Error);
}

TEST_CASE("G1 pools groups with n_i - 1 weights") {
  const Dataset d({summary_from_moments(3, 4.0, 1.0), summary_from_moments(5, 5.0, 1.0)});
  const std::vector<double> u{2.0, 4.0};
  const std::vector<double> z{0.0, 0.0};
  // R = (4, 5) so G1 = (2/4 + 4/5) / 6
  CHECK(draw_gv1(d, u, z, Gv1Variant::SqrtN) == doctest::Approx((0.5 + 0.8) / 6.0));
  // G2 = N / sum n_i R_i = 8 / (12 + 25)
  CHECK(draw_gv2(d, u, 0.0) == doctest::Approx(8.0 / 37.0));
}

TEST_CASE("draws are reproducible per seed") {
  const auto d = fixtures::hospital_dataset();
  PivotalConfig cfg;
  cfg.draws = 2000;
  cfg.seed = 11;
  const auto a = draw_pivotals(d, cfg);
  const auto b = draw_pivotals(d, cfg);
  CHECK(a.gv1.values == b.gv1.values);
  CHECK(a.gv2.values == b.gv2.values);
  cfg.seed = 12;
  const auto c = draw_pivotals(d, cfg);
  CHECK(a.gv2.values != c.gv2.values);
  CHECK(a.gv1.values.size() == 2000);
  for (std::size_t j = 0; j < a.gv3.values.size(); ++j) {
    CHECK(a.gv3.values[j] == doctest::Approx(0.5 * (a.gv1.values[j] + a.gv2.values[j])));
  }
}

TEST_CASE("a shorter run is a prefix of a longer one") {
  const auto d = fixtures::hospital_dataset();
  PivotalConfig cfg;
  cfg.seed = 3;
  cfg.draws = 100;
  const auto a = draw_pivotals(d, cfg);
  cfg.draws = 300;
  const auto b = draw_pivotals(d, cfg);
  CHECK(std::equal(a.gv2.values.begin(), a.gv2.values.end(), b.gv2.values.begin()));
}

TEST_CASE("GV2 agrees with the likelihood interval for large samples") {
  const auto d = testing::normal_dataset({400, 400, 400}, {10, 20, 30}, 0.2, 8);
  PivotalConfig cfg;
  cfg.draws = 20000;
  cfg.seed = 5;
  const auto gv = gpv_ci(d, Method::GV2, 0.95, cfg);
  const auto fit = fit_mle(d);
  const auto ml = ci_mslr(d, 0.95, fit);
  CHECK(gv.lower == doctest::Approx(ml.lower).epsilon(0.01));
  CHECK(gv.upper == doctest::Approx(ml.upper).epsilon(0.01));
}

TEST_CASE("generalized p-value is dual to the interval") {
  const auto d = fixtures::hospital_dataset();
  PivotalConfig cfg;
  cfg.draws = 20000;
  cfg.seed = 9;
  const auto ci = gpv_ci(d, Method::GV2, 0.95, cfg);
  CHECK(gpv_pvalue(d, Method::GV2, ci.lower, cfg) == doctest::Approx(0.05).epsilon(0.05));
  CHECK(gpv_pvalue(d, Method::GV2, ci.upper, cfg) == doctest::Approx(0.05).epsilon(0.05));
  CHECK(gpv_pvalue(d, Method::GV2, 0.6, cfg) > 0.5);
  CHECK_THROWS_AS(gpv_pvalue(d, Method::GV2, -1.0, cfg), Error);
  CHECK_THROWS_AS(gpv_ci(d, Method::MSLR, 0.95, cfg), Error);
}

TEST_CASE("variant names") {
  CHECK(parse_gv1_variant("sqrt-n") == Gv1Variant::SqrtN);
  CHECK(parse_gv1_variant("AS-PRINTED") == Gv1Variant::AsPrinted);
  CHECK_FALSE(parse_gv1_variant("other").has_value());
  CHECK(to_string(Gv1Variant::SqrtN) == "sqrt-n");
}
