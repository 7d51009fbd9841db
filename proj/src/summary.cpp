#include "cvinfer/summary.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "cvinfer/error.hpp"

namespace cvinfer {

namespace {

void check_group_mean(const SampleSummary& s, std::size_t index) {
  if (!(s.mean > 0.0)) {
    std::ostringstream msg;
    msg << "group " << index << " has mean " << s.mean << "; the model requires positive means";
    throw Error(ErrorKind::NegativeMeanGroup, msg.str());
  }
}

}  // namespace

SampleSummary summarize(const GroupObservations& group) {
  const auto& x = group.values;
  if (x.size() < 2) {
    throw Error(ErrorKind::TooFewObservations, "a group needs at least 2 observations");
  }
  for (double v : x) {
    if (!std::isfinite(v)) throw Error(ErrorKind::DomainError, "non-finite observation");
  }
  const int n = static_cast<int>(x.size());
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  if (!(ss > 0.0)) throw Error(ErrorKind::ZeroVariance, "all observations in a group are equal");

  SampleSummary s;
  s.n = n;
  s.mean = mean;
  s.sd = std::sqrt(ss / (n - 1));
  s.mean_sq = mean * mean + ss / n;
  return s;
}

SampleSummary summary_from_moments(int n, double mean, double sd) {
  if (n < 2) throw Error(ErrorKind::TooFewObservations, "a group needs at least 2 observations");
  if (!std::isfinite(mean) || !std::isfinite(sd)) {
    throw Error(ErrorKind::DomainError, "non-finite summary statistic");
  }
  if (!(sd > 0.0)) throw Error(ErrorKind::ZeroVariance, "standard deviation must be positive");
  SampleSummary s;
  s.n = n;
  s.mean = mean;
  s.sd = sd;
  s.mean_sq = mean * mean + sd * sd * (n - 1) / n;
  return s;
}

Dataset::Dataset(std::vector<SampleSummary> groups, std::vector<std::string> labels)
    : groups_(std::move(groups)), labels_(std::move(labels)) {
  if (groups_.empty()) throw Error(ErrorKind::InvalidParameter, "dataset needs at least one group");
  if (!labels_.empty() && labels_.size() != groups_.size()) {
    throw Error(ErrorKind::InvalidParameter, "label count does not match group count");
  }
  for (std::size_t i = 0; i < groups_.size(); ++i) {
    const auto& g = groups_[i];
    if (g.n < 2) throw Error(ErrorKind::TooFewObservations, "a group needs at least 2 observations");
    if (!(g.sd > 0.0)) throw Error(ErrorKind::ZeroVariance, "group has zero variance");
    check_group_mean(g, i);
    total_n_ += g.n;
  }
}

Dataset Dataset::from_raw(std::vector<GroupObservations> raw, std::vector<std::string> labels) {
  std::vector<SampleSummary> groups;
  groups.reserve(raw.size());
  for (const auto& g : raw) groups.push_back(summarize(g));
  Dataset d(std::move(groups), std::move(labels));
  d.raw_ = std::move(raw);
  return d;
}

Dataset Dataset::scaled(std::span<const double> factors) const {
  if (factors.size() != k()) throw Error(ErrorKind::InvalidParameter, "one factor per group required");
  for (double c : factors) {
    if (!(c > 0.0)) throw Error(ErrorKind::NonPositiveParameter, "scale factors must be positive");
  }
  if (has_raw()) {
    std::vector<GroupObservations> raw = raw_;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      for (double& v : raw[i].values) v *= factors[i];
    }
    return from_raw(std::move(raw), labels_);
  }
  std::vector<SampleSummary> groups = groups_;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    groups[i] = summary_from_moments(groups[i].n, groups[i].mean * factors[i], groups[i].sd * factors[i]);
  }
  return Dataset(std::move(groups), labels_);
}

}  // namespace cvinfer
