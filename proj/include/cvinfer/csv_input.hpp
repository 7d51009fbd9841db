#pragma once

#include <istream>
#include <optional>
#include <string_view>

#include "cvinfer/summary.hpp"

namespace cvinfer {

/// RawLong: columns group,value (one row per observation).
/// SummaryWide: columns group,n,mean,sd (one row per group).
enum class InputKind { RawLong, SummaryWide };

std::optional<InputKind> parse_input_kind(std::string_view name) noexcept;

/// Reads a dataset from CSV. The header row is required; when `kind` is not
/// given it is inferred from the header. Groups keep their order of first
/// appearance. Throws ParseError naming the offending line, or the
/// data-validation errors raised by Dataset.
Dataset read_dataset_csv(std::istream& in, std::optional<InputKind> kind = std::nullopt);

}  // namespace cvinfer
