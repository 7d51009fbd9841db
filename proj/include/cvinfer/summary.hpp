#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cvinfer {

/// Raw observations of one group, in common measurement units.
struct GroupObservations {
  std::vector<double> values;
};

/// Per-group sufficient statistics.
///
/// `mean_sq` is the mean of squares (1/n) sum x^2 and `sd` the n-1
/// denominator standard deviation. The two are kept consistent by the
/// factory functions: mean_sq = mean^2 + (n-1)/n * sd^2.
struct SampleSummary {
  int n = 0;
  double mean = 0.0;
  double mean_sq = 0.0;
  double sd = 0.0;

  /// Centered second moment (1/n) sum (x - mean)^2.
  double var_n() const noexcept { return sd * sd * (n - 1) / n; }

  /// sum_j (x_j - a)(x_j - b), computed in centered form.
  double cross(double a, double b) const noexcept {
    return n * (var_n() + (mean - a) * (mean - b));
  }
};

/// Validated summary from raw values. Throws TooFewObservations or ZeroVariance.
SampleSummary summarize(const GroupObservations& group);

/// Validated summary from (n, mean, sd) as published in summary tables.
SampleSummary summary_from_moments(int n, double mean, double sd);

/// k independent groups; `raw` is either empty or parallel to `groups`.
class Dataset {
 public:
  /// Summary-only dataset. Requires k >= 1 and every group mean > 0.
  explicit Dataset(std::vector<SampleSummary> groups, std::vector<std::string> labels = {});

  /// Raw dataset; summaries are computed with `summarize`.
  static Dataset from_raw(std::vector<GroupObservations> raw, std::vector<std::string> labels = {});

  std::span<const SampleSummary> groups() const noexcept { return groups_; }
  const SampleSummary& group(std::size_t i) const { return groups_.at(i); }
  std::size_t k() const noexcept { return groups_.size(); }
  int total_n() const noexcept { return total_n_; }

  bool has_raw() const noexcept { return !raw_.empty(); }
  std::span<const GroupObservations> raw() const noexcept { return raw_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  /// Dataset with group i multiplied by factors[i] > 0 (raw data scaled too).
  Dataset scaled(std::span<const double> factors) const;

  /// Same summaries, raw observations dropped.
  Dataset summary_only() const { return Dataset(groups_, labels_); }

 private:
  std::vector<SampleSummary> groups_;
  std::vector<GroupObservations> raw_;
  std::vector<std::string> labels_;
  int total_n_ = 0;
};

}  // namespace cvinfer
