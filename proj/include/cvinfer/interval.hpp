#pragma once

#include <optional>
#include <string_view>

namespace cvinfer {

enum class Method { MSLR, SLR, GV1, GV2, GV3 };

std::string_view to_string(Method m) noexcept;
/// Parses "mslr", "slr", "gv1", "gv2", "gv3" (case-insensitive).
std::optional<Method> parse_method(std::string_view name) noexcept;

/// A two-sided interval for the common CV plus what produced it.
struct IntervalEstimate {
  Method method = Method::MSLR;
  double level = 0.95;
  double lower = 0.0;
  double upper = 0.0;

  // likelihood methods
  std::optional<double> tau_hat;
  std::optional<int> iterations;
  // pivotal methods
  std::optional<double> stderr_lower;
  std::optional<double> stderr_upper;
  std::optional<long> draws;
  std::optional<long> redraws;

  double length() const noexcept { return upper - lower; }
  bool contains(double tau) const noexcept { return lower <= tau && tau <= upper; }
};

}  // namespace cvinfer
