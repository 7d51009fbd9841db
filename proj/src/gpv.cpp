#include "cvinfer/gpv.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "cvinfer/error.hpp"
#include "cvinfer/random.hpp"

namespace cvinfer {

namespace {

constexpr std::uint64_t kPivotalStream = 0x47505631;  // "GPV1"
constexpr int kMaxRedrawsPerReplicate = 1000;

void require_inputs(const Dataset& data, std::span<const double> u) {
  if (u.size() != data.k()) throw Error(ErrorKind::InvalidParameter, "one chi-square draw per group required");
  for (double v : u) {
    if (!(v > 0.0)) throw Error(ErrorKind::InvalidParameter, "chi-square draws must be positive");
  }
}

const PivotalSample& select(const PivotalDraws& draws, Method method) {
  switch (method) {
    case Method::GV1: return draws.gv1;
    case Method::GV2: return draws.gv2;
    case Method::GV3: return draws.gv3;
    default: break;
  }
  throw Error(ErrorKind::InvalidParameter, "not a generalized pivotal method");
}

}  // namespace

std::string_view to_string(Gv1Variant v) noexcept {
  return v == Gv1Variant::AsPrinted ? "as-printed" : "sqrt-n";
}

std::optional<Gv1Variant> parse_gv1_variant(std::string_view name) noexcept {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (s == "as-printed" || s == "asprinted" || s == "printed") return Gv1Variant::AsPrinted;
  if (s == "sqrt-n" || s == "sqrtn") return Gv1Variant::SqrtN;
  return std::nullopt;
}

double draw_gv1(const Dataset& data, std::span<const double> u, std::span<const double> z, Gv1Variant variant) {
  require_inputs(data, u);
  if (z.size() != data.k()) throw Error(ErrorKind::InvalidParameter, "one normal draw per group required");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < data.k(); ++i) {
    const auto& g = data.group(i);
    const double df = g.n - 1.0;
    const double z_scale = variant == Gv1Variant::AsPrinted ? g.n : std::sqrt(static_cast<double>(g.n));
    const double r = (g.mean / g.sd) * std::sqrt(u[i] / df) - z[i] / z_scale;
    if (r == 0.0) throw Error(ErrorKind::ZeroPivotalDenominator, "R_i is exactly zero");
    num += df / r;
    den += df;
  }
  return num / den;
}

double draw_gv2(const Dataset& data, std::span<const double> u, double z) {
  require_inputs(data, u);
  double den = 0.0;
  for (std::size_t i = 0; i < data.k(); ++i) {
    const auto& g = data.group(i);
    den += g.n * std::sqrt(u[i] / (g.n - 1.0)) * (g.mean / g.sd);
  }
  const double n = data.total_n();
  den -= std::sqrt(n) * z;
  if (den == 0.0) throw Error(ErrorKind::ZeroPivotalDenominator, "G2 denominator is exactly zero");
  return n / den;
}

PivotalDraws draw_pivotals(const Dataset& data, const PivotalConfig& cfg) {
  if (cfg.draws < 1) throw Error(ErrorKind::InvalidParameter, "need at least one pivotal draw");
  const std::size_t k = data.k();
  PivotalDraws out;
  out.gv1.method = Method::GV1;
  out.gv2.method = Method::GV2;
  out.gv3.method = Method::GV3;
  out.gv1.values.reserve(static_cast<std::size_t>(cfg.draws));
  out.gv2.values.reserve(static_cast<std::size_t>(cfg.draws));
  out.gv3.values.reserve(static_cast<std::size_t>(cfg.draws));

  std::vector<double> u(k);
  std::vector<double> z(k);
  for (long j = 0; j < cfg.draws; ++j) {
    RngStream rng(cfg.seed, kPivotalStream, static_cast<std::uint64_t>(j));
    for (int attempt = 0;; ++attempt) {
      if (attempt == kMaxRedrawsPerReplicate) {
        throw Error(ErrorKind::ZeroPivotalDenominator, "pivotal denominators degenerate on every redraw");
      }
      for (std::size_t i = 0; i < k; ++i) u[i] = chi_square(rng, data.group(i).n - 1.0);
      for (std::size_t i = 0; i < k; ++i) z[i] = std_normal(rng);
      const double z_pooled = std_normal(rng);
      double g1;
      double g2;
      try {
        g1 = draw_gv1(data, u, z, cfg.gv1_variant);
        g2 = draw_gv2(data, u, z_pooled);
      } catch (const Error&) {
        ++out.redraws;
        continue;
      }
      if (!std::isfinite(g1) || !std::isfinite(g2)) {
        ++out.redraws;
        continue;
      }
      out.gv1.values.push_back(g1);
      out.gv2.values.push_back(g2);
      out.gv3.values.push_back(draw_gv3(g1, g2));
      break;
    }
  }
  return out;
}

double quantile_type7(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw Error(ErrorKind::InvalidParameter, "quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::DomainError, "quantile probability must lie in [0, 1]");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

IntervalEstimate percentile_interval(const PivotalSample& sample, double level) {
  if (!(level > 0.0 && level < 1.0)) throw Error(ErrorKind::DomainError, "level must lie in (0, 1)");
  std::vector<double> sorted = sample.values;
  std::sort(sorted.begin(), sorted.end());
  const double alpha = 1.0 - level;
  const double p_lo = 0.5 * alpha;
  const double p_hi = 1.0 - 0.5 * alpha;

  IntervalEstimate ci;
  ci.method = sample.method;
  ci.level = level;
  ci.lower = quantile_type7(sorted, p_lo);
  ci.upper = quantile_type7(sorted, p_hi);
  ci.draws = static_cast<long>(sorted.size());

  // Order-statistic standard error: half the spread of quantiles one binomial
  // standard deviation either side of p.
  const double m = static_cast<double>(sorted.size());
  auto endpoint_se = [&](double p) {
    const double d = std::sqrt(p * (1.0 - p) / m);
    return 0.5 * (quantile_type7(sorted, std::min(1.0, p + d)) - quantile_type7(sorted, std::max(0.0, p - d)));
  };
  ci.stderr_lower = endpoint_se(p_lo);
  ci.stderr_upper = endpoint_se(p_hi);
  return ci;
}

double generalized_pvalue(const PivotalSample& sample, double tau0) {
  if (sample.values.empty()) throw Error(ErrorKind::InvalidParameter, "no pivotal draws");
  long above = 0;
  long below = 0;
  for (double g : sample.values) {
    above += g > tau0;
    below += g < tau0;
  }
  const double m = static_cast<double>(sample.values.size());
  return std::min(1.0, 2.0 * std::min(above, below) / m);
}

IntervalEstimate gpv_ci(const Dataset& data, Method method, double level, const PivotalConfig& cfg) {
  const PivotalDraws draws = draw_pivotals(data, cfg);
  IntervalEstimate ci = percentile_interval(select(draws, method), level);
  ci.redraws = draws.redraws;
  return ci;
}

double gpv_pvalue(const Dataset& data, Method method, double tau0, const PivotalConfig& cfg) {
  if (!(tau0 > 0.0)) throw Error(ErrorKind::DomainError, "tau0 must be positive");
  return generalized_pvalue(select(draw_pivotals(data, cfg), method), tau0);
}

}  // namespace cvinfer
