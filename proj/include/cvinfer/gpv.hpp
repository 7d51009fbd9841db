#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "cvinfer/interval.hpp"
#include "cvinfer/summary.hpp"

namespace cvinfer {

/// How the normal term of the GV1 pivot R_i is scaled.
enum class Gv1Variant {
  AsPrinted,  // R_i = (xbar_i/s_i) sqrt(U_i/(n_i-1)) - Z_i/n_i
  SqrtN,      // R_i = (xbar_i/s_i) sqrt(U_i/(n_i-1)) - Z_i/sqrt(n_i)
};

std::string_view to_string(Gv1Variant v) noexcept;
std::optional<Gv1Variant> parse_gv1_variant(std::string_view name) noexcept;

struct PivotalConfig {
  long draws = 100000;
  Gv1Variant gv1_variant = Gv1Variant::SqrtN;
  std::uint64_t seed = 0;
};

struct PivotalSample {
  Method method = Method::GV1;
  std::vector<double> values;
};

/// Paired draws of the three pivots. Replicate j uses the stream
/// (seed, pivotal stream, j), so draws can be partitioned arbitrarily.
struct PivotalDraws {
  PivotalSample gv1;
  PivotalSample gv2;
  PivotalSample gv3;
  long redraws = 0;  // replicates rejected for a zero or non-finite denominator
};

/// G1 = sum (n_i-1)/R_i / sum (n_i-1). Throws ZeroPivotalDenominator if some R_i is 0.
double draw_gv1(const Dataset& data, std::span<const double> u, std::span<const double> z, Gv1Variant variant);

/// G2 = n / (sum_i n_i sqrt(U_i/(n_i-1)) xbar_i/s_i - sqrt(n) Z).
double draw_gv2(const Dataset& data, std::span<const double> u, double z);

inline double draw_gv3(double g1, double g2) noexcept { return 0.5 * g1 + 0.5 * g2; }

PivotalDraws draw_pivotals(const Dataset& data, const PivotalConfig& cfg);

/// Sample quantile, type 7 (linear interpolation between order statistics).
/// `sorted` must be ascending and non-empty.
double quantile_type7(std::span<const double> sorted, double p);

/// Equal-tailed percentile interval of the pivotal draws.
IntervalEstimate percentile_interval(const PivotalSample& sample, double level);

/// Two-sided generalized p-value 2 min(P(G > tau0), P(G < tau0)).
double generalized_pvalue(const PivotalSample& sample, double tau0);

IntervalEstimate gpv_ci(const Dataset& data, Method method, double level, const PivotalConfig& cfg);
double gpv_pvalue(const Dataset& data, Method method, double tau0, const PivotalConfig& cfg);

}  // namespace cvinfer
