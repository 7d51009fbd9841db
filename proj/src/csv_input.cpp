#include "cvinfer/csv_input.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <string>
#include <vector>

#include "cvinfer/error.hpp"

namespace cvinfer {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

[[noreturn]] void fail_at(int line_no, const std::string& what) {
  throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": " + what);
}

double to_double(const std::string& field, int line_no) {
  double v = 0.0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (ec != std::errc() || ptr != end || field.empty()) fail_at(line_no, "'" + field + "' is not a number");
  return v;
}

int to_int(const std::string& field, int line_no) {
  int v = 0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (ec != std::errc() || ptr != end || field.empty()) fail_at(line_no, "'" + field + "' is not an integer");
  return v;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

std::optional<InputKind> parse_input_kind(std::string_view name) noexcept {
  const std::string s = lower(std::string(name));
  if (s == "raw" || s == "rawlong" || s == "raw-long") return InputKind::RawLong;
  if (s == "summary" || s == "summarywide" || s == "summary-wide") return InputKind::SummaryWide;
  return std::nullopt;
}

Dataset read_dataset_csv(std::istream& in, std::optional<InputKind> kind) {
  std::string line;
  int line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header = split_fields(line);
      break;
    }
  }
  if (header.empty()) throw Error(ErrorKind::ParseError, "input is empty; a header row is required");
  for (auto& h : header) h = lower(h);

  const std::vector<std::string> raw_header = {"group", "value"};
  const std::vector<std::string> wide_header = {"group", "n", "mean", "sd"};
  if (!kind) {
    if (header == raw_header) {
      kind = InputKind::RawLong;
    } else if (header == wide_header) {
      kind = InputKind::SummaryWide;
    } else {
      fail_at(line_no, "header must be 'group,value' or 'group,n,mean,sd'");
    }
  }
  const auto& expected = *kind == InputKind::RawLong ? raw_header : wide_header;
  if (header != expected) {
    fail_at(line_no, *kind == InputKind::RawLong ? "expected header 'group,value'" : "expected header 'group,n,mean,sd'");
  }

  std::vector<std::string> labels;
  std::vector<GroupObservations> raw;
  std::vector<SampleSummary> summaries;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != expected.size()) {
      fail_at(line_no, "expected " + std::to_string(expected.size()) + " fields, found " + std::to_string(fields.size()));
    }
    if (fields[0].empty()) fail_at(line_no, "empty group label");
    auto it = std::find(labels.begin(), labels.end(), fields[0]);
    if (*kind == InputKind::RawLong) {
      const double v = to_double(fields[1], line_no);
      if (it == labels.end()) {
        labels.push_back(fields[0]);
        raw.emplace_back();
        raw.back().values.push_back(v);
      } else {
        raw[static_cast<std::size_t>(it - labels.begin())].values.push_back(v);
      }
    } else {
      if (it != labels.end()) fail_at(line_no, "group '" + fields[0] + "' appears twice");
      labels.push_back(fields[0]);
      try {
        summaries.push_back(summary_from_moments(to_int(fields[1], line_no), to_double(fields[2], line_no),
                                                 to_double(fields[3], line_no)));
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::ParseError) throw;
        fail_at(line_no, e.what());
      }
    }
  }
  if (labels.empty()) throw Error(ErrorKind::ParseError, "no data rows after the header");
  if (*kind == InputKind::RawLong) return Dataset::from_raw(std::move(raw), std::move(labels));
  return Dataset(std::move(summaries), std::move(labels));
}

}  // namespace cvinfer
