#pragma once

#include <cmath>
#include <vector>

#include "cvinfer/random.hpp"
#include "cvinfer/summary.hpp"

namespace testing {

/// Normal samples with common CV tau, group means `mu`.
inline cvinfer::Dataset normal_dataset(const std::vector<int>& n, const std::vector<double>& mu, double tau,
                                       std::uint64_t seed) {
  std::vector<cvinfer::GroupObservations> raw;
  for (std::size_t i = 0; i < n.size(); ++i) {
    cvinfer::RngStream rng(seed, 99, i);
    cvinfer::GroupObservations g;
    for (int j = 0; j < n[i]; ++j) g.values.push_back(mu[i] * (1.0 + tau * cvinfer::std_normal(rng)));
    raw.push_back(std::move(g));
  }
  return cvinfer::Dataset::from_raw(std::move(raw));
}

inline bool close_rel(double a, double b, double rel, double abs_floor = 1e-12) {
  return std::abs(a - b) <= rel * std::max(std::abs(b), abs_floor);
}

}  // namespace testing
