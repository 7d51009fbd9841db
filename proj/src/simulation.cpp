#include "cvinfer/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "cvinfer/distributions.hpp"
#include "cvinfer/error.hpp"
#include "cvinfer/model.hpp"
#include "cvinfer/mslr.hpp"
#include "cvinfer/random.hpp"

namespace cvinfer {

namespace {

using nlohmann::json;

constexpr int kMaxDegenerateRedraws = 1000;
constexpr std::uint64_t kPivotalSeedSalt = 0x6770765F73656564ull;

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

// Neumaier-compensated running sum.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double t = sum + x;
    carry += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

struct RepOutcome {
  std::vector<signed char> status;  // -1 failed, 0 miss, 1 hit
  std::vector<double> length;
  long degenerate_redraws = 0;
  long pivotal_redraws = 0;
};

bool is_pivotal(Method m) { return m == Method::GV1 || m == Method::GV2 || m == Method::GV3; }

RepOutcome run_replication(const SimScenario& sc, long rep) {
  RepOutcome out;
  out.status.assign(sc.methods.size(), -1);
  out.length.assign(sc.methods.size(), 0.0);

  const Dataset data = generate_replication(sc, rep, &out.degenerate_redraws);

  std::optional<FitResult> fit;
  try {
    fit = fit_mle(data);
  } catch (const Error&) {
  }

  std::optional<PivotalDraws> pivots;
  bool pivots_failed = false;

  for (std::size_t m = 0; m < sc.methods.size(); ++m) {
    const Method method = sc.methods[m];
    try {
      IntervalEstimate ci;
      if (is_pivotal(method)) {
        if (pivots_failed) continue;
        if (!pivots) {
          PivotalConfig cfg;
          cfg.draws = sc.gpv_draws;
          cfg.gv1_variant = sc.gv1_variant;
          cfg.seed = mix64(sc.master_seed ^ mix64(sc.design_key() ^ mix64(static_cast<std::uint64_t>(rep) ^ kPivotalSeedSalt)));
          try {
            pivots = draw_pivotals(data, cfg);
          } catch (const Error&) {
            pivots_failed = true;
            continue;
          }
          out.pivotal_redraws += pivots->redraws;
        }
        const PivotalSample& s = method == Method::GV1 ? pivots->gv1 : method == Method::GV2 ? pivots->gv2 : pivots->gv3;
        ci = percentile_interval(s, sc.level);
      } else {
        if (!fit) continue;
        ci = method == Method::MSLR ? ci_mslr(data, sc.level, *fit) : ci_slr(data, sc.level, *fit);
      }
      out.status[m] = ci.contains(sc.tau) ? 1 : 0;
      out.length[m] = ci.length();
    } catch (const Error&) {
      out.status[m] = -1;
    }
  }
  return out;
}

std::string join_ints(const std::vector<int>& v, char sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += std::to_string(v[i]);
  }
  return s;
}

std::string format_fixed(double x, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << x;
  return os.str();
}

std::string format_general(double x) {
  std::ostringstream os;
  os << std::setprecision(10) << x;
  return os.str();
}

std::string emit_csv(const std::vector<std::pair<SimScenario, SimResult>>& results) {
  std::ostringstream os;
  os << "family,k,n_vector,tau,method,cp,el,mc_stderr,failures,reps,seed\n";
  for (const auto& [sc, res] : results) {
    for (const auto& st : res.methods) {
      os << to_string(sc.family) << ',' << sc.k() << ",\"" << join_ints(sc.n, ',') << "\","
         << format_general(sc.tau) << ',' << to_string(st.method) << ',' << format_fixed(st.coverage, 6) << ','
         << format_fixed(st.expected_length, 6) << ',' << format_fixed(st.mc_stderr_cp, 6) << ',' << st.failures
         << ',' << res.reps << ',' << sc.master_seed << '\n';
    }
  }
  return os.str();
}

// One block per (family, k): a CP row and an EL row per sample-size vector,
// columns grouped by tau then method.
std::string emit_markdown(const std::vector<std::pair<SimScenario, SimResult>>& results) {
  struct Block {
    Family family;
    std::size_t k;
    std::vector<double> taus;
    std::vector<std::vector<int>> rows;
    std::vector<Method> methods;
    std::map<std::pair<std::vector<int>, double>, const SimResult*> cells;
  };
  std::vector<Block> blocks;
  for (const auto& [sc, res] : results) {
    auto it = std::find_if(blocks.begin(), blocks.end(),
                           [&](const Block& b) { return b.family == sc.family && b.k == sc.k(); });
    if (it == blocks.end()) {
      blocks.push_back(Block{sc.family, sc.k(), {}, {}, {}, {}});
      it = std::prev(blocks.end());
    }
    if (std::find(it->taus.begin(), it->taus.end(), sc.tau) == it->taus.end()) it->taus.push_back(sc.tau);
    if (std::find(it->rows.begin(), it->rows.end(), sc.n) == it->rows.end()) it->rows.push_back(sc.n);
    for (const auto& st : res.methods) {
      if (std::find(it->methods.begin(), it->methods.end(), st.method) == it->methods.end()) {
        it->methods.push_back(st.method);
      }
    }
    it->cells[{sc.n, sc.tau}] = &res;
  }

  std::ostringstream os;
  for (const auto& b : blocks) {
    os << "### " << to_string(b.family) << ", k=" << b.k << "\n\n| n | |";
    for (double t : b.taus) {
      for (Method m : b.methods) os << " tau=" << format_general(t) << " " << to_string(m) << " |";
    }
    os << "\n|---|---|";
    for (std::size_t i = 0; i < b.taus.size() * b.methods.size(); ++i) os << "---|";
    os << '\n';
    for (const auto& row : b.rows) {
      for (int pass = 0; pass < 2; ++pass) {
        os << "| " << (pass == 0 ? join_ints(row, ',') : std::string()) << " | " << (pass == 0 ? "CP" : "EL")
           << " |";
        for (double t : b.taus) {
          auto cell = b.cells.find({row, t});
          for (Method m : b.methods) {
            std::string value;
            if (cell != b.cells.end()) {
              for (const auto& st : cell->second->methods) {
                if (st.method == m) value = format_fixed(pass == 0 ? st.coverage : st.expected_length, 3);
              }
            }
            os << ' ' << value << " |";
          }
        }
        os << '\n';
      }
    }
    os << '\n';
  }
  return os.str();
}

[[noreturn]] void schema_error(const std::string& what) { throw Error(ErrorKind::ParseError, what); }

SimScenario scenario_from_json(const json& j) {
  static const std::set<std::string> known = {"schema_version", "family", "k",         "n",
                                              "location",       "tau",    "level",     "reps",
                                              "methods",        "gpv_draws", "master_seed", "gv1_variant",
                                              "table"};
  if (!j.is_object()) schema_error("scenario must be a JSON object");
  for (const auto& item : j.items()) {
    if (!known.contains(item.key())) schema_error("unknown scenario field '" + item.key() + "'");
  }
  SimScenario sc;
  try {
    const std::string family = j.at("family").get<std::string>();
    if (family == "normal") {
      sc.family = Family::Normal;
    } else if (family == "weibull") {
      sc.family = Family::Weibull;
    } else {
      schema_error("family must be \"normal\" or \"weibull\"");
    }
    sc.n = j.at("n").get<std::vector<int>>();
    sc.location = j.at("location").get<std::vector<double>>();
    sc.tau = j.at("tau").get<double>();
    if (j.contains("k") && j.at("k").get<std::size_t>() != sc.n.size()) schema_error("k does not match length of n");
    if (j.contains("level")) sc.level = j.at("level").get<double>();
    if (j.contains("reps")) sc.reps = j.at("reps").get<long>();
    if (j.contains("gpv_draws")) sc.gpv_draws = j.at("gpv_draws").get<long>();
    if (j.contains("master_seed")) sc.master_seed = j.at("master_seed").get<std::uint64_t>();
    if (j.contains("table")) sc.table = j.at("table").get<int>();
    if (j.contains("gv1_variant")) {
      auto v = parse_gv1_variant(j.at("gv1_variant").get<std::string>());
      if (!v) schema_error("gv1_variant must be \"as-printed\" or \"sqrt-n\"");
      sc.gv1_variant = *v;
    }
    if (j.contains("methods")) {
      sc.methods.clear();
      for (const auto& name : j.at("methods").get<std::vector<std::string>>()) {
        auto m = parse_method(name);
        if (!m) schema_error("unknown method '" + name + "'");
        sc.methods.push_back(*m);
      }
    }
  } catch (const json::exception& e) {
    schema_error(std::string("scenario field error: ") + e.what());
  }
  try {
    sc.validate();
  } catch (const Error& e) {
    schema_error(e.what());
  }
  return sc;
}

}  // namespace

std::string_view to_string(Family f) noexcept { return f == Family::Normal ? "normal" : "weibull"; }

void SimScenario::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::InvalidParameter, what); };
  if (n.empty()) fail("scenario needs at least one group");
  if (location.size() != n.size()) fail("location must have one entry per group");
  for (int ni : n) {
    if (ni < 2) fail("every sample size must be at least 2");
  }
  for (double loc : location) {
    if (!(loc > 0.0) || !std::isfinite(loc)) fail("locations must be positive");
  }
  if (!(tau > 0.0 && tau < 1.0)) fail("tau must lie in (0, 1)");
  if (!(level > 0.0 && level < 1.0)) fail("level must lie in (0, 1)");
  if (reps < 1) fail("reps must be positive");
  if (methods.empty()) fail("at least one method is required");
  if (gpv_draws < 1) fail("gpv_draws must be positive");
  if (family == Family::Weibull) weibull_shape_for_cv(tau);
}

std::uint64_t SimScenario::design_key() const {
  std::ostringstream os;
  os << std::setprecision(17) << to_string(family) << '|' << join_ints(n, ',') << '|';
  for (double loc : location) os << loc << ',';
  os << '|' << tau;
  return fnv1a(os.str());
}

const MethodStats& SimResult::stats(Method m) const {
  for (const auto& st : methods) {
    if (st.method == m) return st;
  }
  throw Error(ErrorKind::InvalidParameter, "method was not part of the study");
}

Dataset generate_replication(const SimScenario& sc, long rep, long* redraws) {
  const std::size_t k = sc.k();
  const double shape = sc.family == Family::Weibull ? weibull_shape_for_cv(sc.tau) : 0.0;
  const std::uint64_t key = sc.design_key();

  std::vector<GroupObservations> groups(k);
  for (std::size_t i = 0; i < k; ++i) {
    const std::uint64_t substream = static_cast<std::uint64_t>(rep) * k + i;
    for (int attempt = 0;; ++attempt) {
      if (attempt == kMaxDegenerateRedraws) {
        throw Error(ErrorKind::InvalidParameter, "scenario keeps producing degenerate samples");
      }
      RngStream rng(sc.master_seed, attempt == 0 ? key : mix64(key + static_cast<std::uint64_t>(attempt)), substream);
      auto& values = groups[i].values;
      values.resize(static_cast<std::size_t>(sc.n[i]));
      for (double& x : values) {
        x = sc.family == Family::Normal ? sc.location[i] + sc.tau * sc.location[i] * std_normal(rng)
                                        : weibull(rng, shape, sc.location[i]);
      }
      try {
        const SampleSummary s = summarize(groups[i]);
        if (s.mean > 0.0) break;
      } catch (const Error&) {
      }
      if (redraws) ++*redraws;
    }
  }
  return Dataset::from_raw(std::move(groups));
}

SimResult run_study(const SimScenario& sc, int threads, const ProgressFn& progress) {
  sc.validate();
  const long reps = sc.reps;
  std::vector<RepOutcome> outcomes(static_cast<std::size_t>(reps));

  std::atomic<long> next{0};
  std::atomic<long> done{0};
  std::mutex progress_mutex;
  auto worker = [&] {
    for (long rep = next++; rep < reps; rep = next++) {
      outcomes[static_cast<std::size_t>(rep)] = run_replication(sc, rep);
      const long d = ++done;
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(d, reps);
      }
    }
  };
  const int n_threads = std::max(1, threads);
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }

  // Reduce in replication order so the result is independent of scheduling.
  SimResult result;
  result.reps = reps;
  for (std::size_t m = 0; m < sc.methods.size(); ++m) {
    MethodStats st;
    st.method = sc.methods[m];
    CompensatedSum length;
    for (const auto& o : outcomes) {
      if (o.status[m] < 0) {
        ++st.failures;
        continue;
      }
      ++st.valid;
      st.hits += o.status[m];
      length.add(o.length[m]);
    }
    if (st.valid > 0) {
      st.coverage = static_cast<double>(st.hits) / st.valid;
      st.expected_length = length.value() / st.valid;
      st.mc_stderr_cp = std::sqrt(st.coverage * (1.0 - st.coverage) / st.valid);
    }
    result.methods.push_back(st);
  }
  for (const auto& o : outcomes) {
    result.degenerate_redraws += o.degenerate_redraws;
    result.pivotal_redraws += o.pivotal_redraws;
  }
  return result;
}

std::vector<SimScenario> builtin_scenarios(long reps, std::uint64_t master_seed) {
  const std::vector<std::vector<int>> rows3 = {{4, 4, 4},  {4, 5, 6},  {6, 5, 4}, {5, 5, 10}, {10, 5, 5},
                                               {4, 5, 20}, {20, 5, 4}, {7, 7, 7}, {7, 8, 9}};
  const std::vector<std::vector<int>> rows5 = {{4, 4, 4, 4, 4},  {4, 4, 5, 5, 6},  {6, 5, 5, 4, 4},
                                               {5, 5, 5, 5, 10}, {10, 5, 5, 5, 5}, {4, 4, 5, 5, 20},
                                               {20, 5, 5, 4, 4}, {7, 7, 7, 7, 7},  {7, 7, 8, 8, 9}};
  std::vector<std::vector<int>> rows10;
  for (const auto& r : rows5) {
    std::vector<int> twice = r;
    twice.insert(twice.end(), r.begin(), r.end());
    rows10.push_back(twice);
  }
  const std::vector<double> loc3 = {20, 10, 10};
  const std::vector<double> loc5 = {50, 40, 30, 20, 10};
  const std::vector<double> loc10 = {50, 40, 30, 20, 10, 50, 40, 30, 20, 10};
  const std::vector<double> taus = {0.1, 0.2, 0.3, 0.35};

  struct Layout {
    const std::vector<std::vector<int>>* rows;
    const std::vector<double>* location;
  };
  const Layout layouts[3] = {{&rows3, &loc3}, {&rows5, &loc5}, {&rows10, &loc10}};

  std::vector<SimScenario> out;
  for (int table = 1; table <= 6; ++table) {
    const Layout& layout = layouts[(table - 1) % 3];
    for (const auto& row : *layout.rows) {
      for (double tau : taus) {
        SimScenario sc;
        sc.family = table <= 3 ? Family::Normal : Family::Weibull;
        sc.n = row;
        sc.location = *layout.location;
        sc.tau = tau;
        sc.reps = reps;
        sc.master_seed = master_seed;
        sc.table = table;
        out.push_back(std::move(sc));
      }
    }
  }
  return out;
}

std::string emit_table(const std::vector<std::pair<SimScenario, SimResult>>& results, TableFormat format) {
  return format == TableFormat::Csv ? emit_csv(results) : emit_markdown(results);
}

std::vector<SimScenario> parse_scenarios(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    schema_error(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) schema_error("scenario document must be a JSON object");
  if (!doc.contains("schema_version") || !doc.at("schema_version").is_number_integer() ||
      doc.at("schema_version").get<int>() != 1) {
    schema_error("schema_version must be 1");
  }
  std::vector<SimScenario> out;
  if (doc.contains("scenarios")) {
    if (!doc.at("scenarios").is_array()) schema_error("scenarios must be an array");
    for (const auto& item : doc.at("scenarios")) {
      json copy = item;
      copy["schema_version"] = 1;
      out.push_back(scenario_from_json(copy));
    }
  } else {
    out.push_back(scenario_from_json(doc));
  }
  return out;
}

std::string scenario_to_json(const SimScenario& sc) {
  json j;
  j["schema_version"] = 1;
  j["family"] = std::string(to_string(sc.family));
  j["k"] = sc.k();
  j["n"] = sc.n;
  j["location"] = sc.location;
  j["tau"] = sc.tau;
  j["level"] = sc.level;
  j["reps"] = sc.reps;
  std::vector<std::string> methods;
  for (Method m : sc.methods) methods.emplace_back(to_string(m));
  j["methods"] = methods;
  j["gpv_draws"] = sc.gpv_draws;
  j["master_seed"] = sc.master_seed;
  j["gv1_variant"] = std::string(to_string(sc.gv1_variant));
  if (sc.table) j["table"] = sc.table;
  return j.dump(2);
}

}  // namespace cvinfer
