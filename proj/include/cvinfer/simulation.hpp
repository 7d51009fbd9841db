#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cvinfer/gpv.hpp"
#include "cvinfer/interval.hpp"
#include "cvinfer/summary.hpp"

namespace cvinfer {

enum class Family { Normal, Weibull };

std::string_view to_string(Family f) noexcept;

/// One cell of a coverage study: data-generating design plus methods to score.
struct SimScenario {
  Family family = Family::Normal;
  std::vector<int> n;
  /// mu_i for Normal, Weibull scale beta_i for Weibull.
  std::vector<double> location;
  double tau = 0.1;
  double level = 0.95;
  long reps = 10000;
  std::vector<Method> methods{Method::MSLR, Method::GV1, Method::GV2, Method::GV3};
  long gpv_draws = 5000;
  std::uint64_t master_seed = 1;
  Gv1Variant gv1_variant = Gv1Variant::SqrtN;
  /// Which published table the cell belongs to (0 when user supplied).
  int table = 0;

  std::size_t k() const noexcept { return n.size(); }
  /// Throws InvalidParameter describing the first violated invariant.
  void validate() const;
  /// Stable 64-bit key of the design (family, n, location, tau); seeds the data streams.
  std::uint64_t design_key() const;
};

struct MethodStats {
  Method method = Method::MSLR;
  long hits = 0;
  long valid = 0;     // reps - failures
  long failures = 0;  // replications where the method threw
  double coverage = 0.0;
  double expected_length = 0.0;
  double mc_stderr_cp = 0.0;
};

struct SimResult {
  long reps = 0;
  long degenerate_redraws = 0;
  long pivotal_redraws = 0;
  std::vector<MethodStats> methods;

  const MethodStats& stats(Method m) const;
};

/// Replication `rep` of the scenario. Group i is drawn from the stream
/// (master_seed, design key, rep*k + i); samples with zero variance or a
/// non-positive mean are redrawn on a fresh stream and counted in `redraws`.
Dataset generate_replication(const SimScenario& sc, long rep, long* redraws = nullptr);

using ProgressFn = std::function<void(long done, long total)>;

/// Coverage and expected length per method. Results do not depend on `threads`.
SimResult run_study(const SimScenario& sc, int threads = 1, const ProgressFn& progress = {});

/// Every cell of the six published coverage tables (Normal tables 1-3,
/// Weibull tables 4-6; k = 3, 5, 10; nine sample-size rows; four tau values).
std::vector<SimScenario> builtin_scenarios(long reps = 10000, std::uint64_t master_seed = 1);

enum class TableFormat { Csv, Markdown };

std::string emit_table(const std::vector<std::pair<SimScenario, SimResult>>& results, TableFormat format);

/// Scenario documents: {"schema_version": 1, ...scenario fields...} or
/// {"schema_version": 1, "scenarios": [...]}. Throws ParseError on schema violations.
std::vector<SimScenario> parse_scenarios(std::string_view json_text);
std::string scenario_to_json(const SimScenario& sc);

}  // namespace cvinfer
