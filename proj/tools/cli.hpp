#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cvinfer::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kOk = 0,
  kDataError = 2,       // usage, parse, schema and data-validation errors
  kNumericalError = 3,  // the numerical machinery failed (bracketing, convergence, ...)
};

/// Runs the tool with `args` (excluding the program name). Reports go to
/// `out`, diagnostics and progress to `err`; `in` backs the "-" input path.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace cvinfer::cli
