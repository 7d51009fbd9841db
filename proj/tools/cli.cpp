#include "cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <optional>
#include <sstream>

#include "cvinfer/csv_input.hpp"
#include "cvinfer/error.hpp"
#include "cvinfer/fixtures.hpp"
#include "cvinfer/gpv.hpp"
#include "cvinfer/model.hpp"
#include "cvinfer/mslr.hpp"
#include "cvinfer/simulation.hpp"

namespace cvinfer::cli {

namespace {

using nlohmann::json;

constexpr std::uint64_t kDefaultSeed = 42;

/// Thrown for argument problems detected after CLI11 parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InferenceOptions {
  std::string input;
  std::string kind;
  std::string method = "all";
  double level = 0.95;
  long draws = 100000;
  std::optional<std::uint64_t> seed;
  std::string gv1_variant = "sqrt-n";
  std::string format = "text";
};

struct SimulateOptions {
  std::string scenario_file;
  std::string builtin;
  std::optional<long> reps;
  std::optional<std::uint64_t> seed;
  int threads = 1;
  std::string out;
  std::string format = "csv";
  std::optional<std::string> gv1_variant;
  std::optional<long> gpv_draws;
  std::vector<std::string> methods;
  bool quiet = false;
};

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("CVINFER_SEED"); env && *env) {
    try {
      std::size_t pos = 0;
      const unsigned long long v = std::stoull(env, &pos);
      if (pos == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError("CVINFER_SEED must be an unsigned integer");
  }
  return kDefaultSeed;
}

std::vector<Method> resolve_methods(const std::string& spec) {
  if (spec == "all") return {Method::MSLR, Method::SLR, Method::GV1, Method::GV2, Method::GV3};
  std::vector<Method> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto m = parse_method(item);
    if (!m) throw UsageError("unknown method '" + item + "'");
    out.push_back(*m);
  }
  if (out.empty()) throw UsageError("no method given");
  return out;
}

Dataset load_dataset(const InferenceOptions& opt, std::istream& in) {
  std::optional<InputKind> kind;
  if (!opt.kind.empty()) {
    kind = parse_input_kind(opt.kind);
    if (!kind) throw UsageError("--kind must be 'raw' or 'summary'");
  }
  if (opt.input == "-") return read_dataset_csv(in, kind);
  std::ifstream file(opt.input);
  if (!file) throw UsageError("cannot open input file '" + opt.input + "'");
  return read_dataset_csv(file, kind);
}

PivotalConfig pivotal_config(const InferenceOptions& opt) {
  PivotalConfig cfg;
  cfg.draws = opt.draws;
  cfg.seed = resolve_seed(opt.seed);
  auto v = parse_gv1_variant(opt.gv1_variant);
  if (!v) throw UsageError("--gv1-variant must be 'as-printed' or 'sqrt-n'");
  cfg.gv1_variant = *v;
  if (cfg.draws < 1) throw UsageError("--draws must be positive");
  return cfg;
}

bool is_pivotal(Method m) { return m == Method::GV1 || m == Method::GV2 || m == Method::GV3; }

std::string num(double x) {
  std::ostringstream os;
  os << std::setprecision(10) << x;
  return os.str();
}

std::string fixed6(double x) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(6) << x;
  return os.str();
}

struct MethodFailure {
  Method method;
  Error error;
};

int failure_exit(const std::vector<MethodFailure>& failures) {
  int code = kOk;
  for (const auto& f : failures) {
    code = std::max(code, is_numerical(f.error.kind()) ? int{kNumericalError} : int{kDataError});
  }
  return code;
}

void report_failures(const std::vector<MethodFailure>& failures, std::ostream& err) {
  for (const auto& f : failures) err << "error: " << to_string(f.method) << ": " << f.error.what() << '\n';
}

int cmd_ci(const InferenceOptions& opt, std::istream& in, std::ostream& out, std::ostream& err) {
  if (!(opt.level > 0.0 && opt.level < 1.0)) throw UsageError("--level must lie in (0, 1)");
  const auto methods = resolve_methods(opt.method);
  const Dataset data = load_dataset(opt, in);
  const PivotalConfig cfg = pivotal_config(opt);

  std::optional<FitResult> fit;
  std::optional<Error> fit_error;
  try {
    fit = fit_mle(data);
  } catch (const Error& e) {
    fit_error = e;
  }
  std::optional<PivotalDraws> pivots;

  std::vector<IntervalEstimate> intervals;
  std::vector<MethodFailure> failures;
  for (Method m : methods) {
    try {
      if (is_pivotal(m)) {
        if (!pivots) pivots = draw_pivotals(data, cfg);
        const PivotalSample& s = m == Method::GV1 ? pivots->gv1 : m == Method::GV2 ? pivots->gv2 : pivots->gv3;
        IntervalEstimate ci = percentile_interval(s, opt.level);
        ci.redraws = pivots->redraws;
        intervals.push_back(ci);
      } else {
        if (!fit) throw *fit_error;
        intervals.push_back(m == Method::MSLR ? ci_mslr(data, opt.level, *fit) : ci_slr(data, opt.level, *fit));
      }
    } catch (const Error& e) {
      failures.push_back({m, e});
    }
  }

  if (opt.format == "json") {
    json j;
    j["k"] = data.k();
    j["n"] = data.total_n();
    j["level"] = opt.level;
    if (fit) {
      j["tau_hat"] = fit->theta_hat.tau;
      j["fit_iterations"] = fit->iterations;
    }
    j["intervals"] = json::array();
    for (const auto& ci : intervals) {
      json e{{"method", to_string(ci.method)}, {"level", ci.level}, {"lower", ci.lower}, {"upper", ci.upper}};
      if (ci.iterations) e["iterations"] = *ci.iterations;
      if (ci.draws) {
        e["draws"] = *ci.draws;
        e["stderr_lower"] = *ci.stderr_lower;
        e["stderr_upper"] = *ci.stderr_upper;
        e["seed"] = cfg.seed;
        e["gv1_variant"] = to_string(cfg.gv1_variant);
      }
      j["intervals"].push_back(e);
    }
    j["errors"] = json::array();
    for (const auto& f : failures) j["errors"].push_back({{"method", to_string(f.method)}, {"message", f.error.what()}});
    out << j.dump(2) << '\n';
  } else if (opt.format == "csv") {
    out << "method,level,lower,upper,tau_hat,iterations,draws,stderr_lower,stderr_upper\n";
    for (const auto& ci : intervals) {
      out << to_string(ci.method) << ',' << num(ci.level) << ',' << num(ci.lower) << ',' << num(ci.upper) << ','
          << (fit ? num(fit->theta_hat.tau) : "") << ',' << (ci.iterations ? std::to_string(*ci.iterations) : "")
          << ',' << (ci.draws ? std::to_string(*ci.draws) : "") << ','
          << (ci.stderr_lower ? num(*ci.stderr_lower) : "") << ','
          << (ci.stderr_upper ? num(*ci.stderr_upper) : "") << '\n';
    }
  } else {
    out << "groups: " << data.k() << ", total n: " << data.total_n() << '\n';
    if (fit) out << "tau_hat: " << fixed6(fit->theta_hat.tau) << " (" << fit->iterations << " iterations)\n";
    out << "level: " << opt.level << '\n';
    for (const auto& ci : intervals) {
      out << std::left << std::setw(5) << to_string(ci.method) << " (" << fixed6(ci.lower) << ", " << fixed6(ci.upper)
          << ")  length " << fixed6(ci.length());
      if (ci.draws) {
        out << "  [draws " << *ci.draws << ", se " << fixed6(*ci.stderr_lower) << "/" << fixed6(*ci.stderr_upper)
            << ", gv1 " << to_string(cfg.gv1_variant) << "]";
      }
      out << '\n';
    }
  }
  report_failures(failures, err);
  return failure_exit(failures);
}

int cmd_test(const InferenceOptions& opt, double tau0, std::istream& in, std::ostream& out, std::ostream& err) {
  if (!(tau0 > 0.0)) throw UsageError("--tau0 must be positive");
  const auto methods = resolve_methods(opt.method);
  const Dataset data = load_dataset(opt, in);
  const PivotalConfig cfg = pivotal_config(opt);

  struct Row {
    Method method;
    double p;
    std::optional<double> statistic;
  };
  std::vector<Row> rows;
  std::vector<MethodFailure> failures;
  std::optional<FitResult> fit;
  std::optional<Error> fit_error;
  try {
    fit = fit_mle(data);
  } catch (const Error& e) {
    fit_error = e;
  }
  std::optional<PivotalDraws> pivots;
  for (Method m : methods) {
    try {
      if (is_pivotal(m)) {
        if (!pivots) pivots = draw_pivotals(data, cfg);
        const PivotalSample& s = m == Method::GV1 ? pivots->gv1 : m == Method::GV2 ? pivots->gv2 : pivots->gv3;
        rows.push_back({m, generalized_pvalue(s, tau0), std::nullopt});
      } else if (!fit) {
        throw *fit_error;
      } else if (m == Method::MSLR) {
        const double rs = r_star(tau0, data, *fit).r_star;
        rows.push_back({m, pvalue_mslr(data, tau0, *fit), rs});
      } else {
        rows.push_back({m, pvalue_slr(data, tau0, *fit), slr_r(tau0, data, *fit)});
      }
    } catch (const Error& e) {
      failures.push_back({m, e});
    }
  }

  if (opt.format == "json") {
    json j;
    j["tau0"] = tau0;
    if (fit) j["tau_hat"] = fit->theta_hat.tau;
    j["tests"] = json::array();
    for (const auto& r : rows) {
      json e{{"method", to_string(r.method)}, {"p_value", r.p}};
      if (r.statistic) e["statistic"] = *r.statistic;
      j["tests"].push_back(e);
    }
    j["errors"] = json::array();
    for (const auto& f : failures) j["errors"].push_back({{"method", to_string(f.method)}, {"message", f.error.what()}});
    out << j.dump(2) << '\n';
  } else if (opt.format == "csv") {
    out << "method,tau0,statistic,p_value\n";
    for (const auto& r : rows) {
      out << to_string(r.method) << ',' << num(tau0) << ',' << (r.statistic ? num(*r.statistic) : "") << ','
          << num(r.p) << '\n';
    }
  } else {
    out << "H0: tau = " << tau0 << " (two-sided)\n";
    if (fit) out << "tau_hat: " << fixed6(fit->theta_hat.tau) << '\n';
    for (const auto& r : rows) {
      out << std::left << std::setw(5) << to_string(r.method) << " p = " << fixed6(r.p);
      if (r.statistic) out << "  (statistic " << fixed6(*r.statistic) << ")";
      out << '\n';
    }
  }
  report_failures(failures, err);
  return failure_exit(failures);
}

std::vector<SimScenario> select_builtin(const std::string& name) {
  auto all = builtin_scenarios();
  if (name == "all") return all;
  int table = 0;
  if (name.rfind("table", 0) == 0 && name.size() == 6 && name[5] >= '1' && name[5] <= '6') table = name[5] - '0';
  if (table == 0) throw UsageError("--builtin must be table1 ... table6 or all");
  std::vector<SimScenario> out;
  for (auto& sc : all) {
    if (sc.table == table) out.push_back(std::move(sc));
  }
  return out;
}

int cmd_simulate(const SimulateOptions& opt, std::ostream& out, std::ostream& err) {
  if (opt.scenario_file.empty() == opt.builtin.empty()) {
    throw UsageError("give exactly one of --scenario or --builtin");
  }
  if (opt.format != "csv" && opt.format != "markdown") throw UsageError("--format must be csv or markdown");
  if (opt.threads < 1) throw UsageError("--threads must be at least 1");

  std::vector<SimScenario> scenarios;
  if (!opt.scenario_file.empty()) {
    std::ifstream file(opt.scenario_file);
    if (!file) throw UsageError("cannot open scenario file '" + opt.scenario_file + "'");
    std::stringstream buf;
    buf << file.rdbuf();
    scenarios = parse_scenarios(buf.str());
  } else {
    scenarios = select_builtin(opt.builtin);
  }

  for (auto& sc : scenarios) {
    if (opt.reps) sc.reps = *opt.reps;
    // Builtin cells always take the resolved seed; file scenarios keep theirs unless --seed is given.
    if (opt.seed || !opt.builtin.empty()) sc.master_seed = resolve_seed(opt.seed);
    if (opt.gpv_draws) sc.gpv_draws = *opt.gpv_draws;
    if (opt.gv1_variant) {
      auto v = parse_gv1_variant(*opt.gv1_variant);
      if (!v) throw UsageError("--gv1-variant must be 'as-printed' or 'sqrt-n'");
      sc.gv1_variant = *v;
    }
    if (!opt.methods.empty()) {
      sc.methods.clear();
      for (const auto& name : opt.methods) {
        auto m = parse_method(name);
        if (!m) throw UsageError("unknown method '" + name + "'");
        sc.methods.push_back(*m);
      }
    }
    try {
      sc.validate();
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }

  std::vector<std::pair<SimScenario, SimResult>> results;
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    const auto& sc = scenarios[i];
    if (!opt.quiet) {
      err << "[" << i + 1 << "/" << scenarios.size() << "] " << to_string(sc.family) << " k=" << sc.k()
          << " tau=" << sc.tau << " reps=" << sc.reps << '\n';
    }
    results.emplace_back(sc, run_study(sc, opt.threads));
  }

  const std::string table =
      emit_table(results, opt.format == "csv" ? TableFormat::Csv : TableFormat::Markdown);
  if (opt.out.empty() || opt.out == "-") {
    out << table;
  } else {
    std::ofstream file(opt.out, std::ios::binary | std::ios::trunc);
    file << table;
    if (!file) throw UsageError("cannot write '" + opt.out + "'");
    if (!opt.quiet) err << "wrote " << opt.out << '\n';
  }
  return kOk;
}

int cmd_fixtures(const std::string& dir, std::ostream& out) {
  for (const auto& path : fixtures::write_all(dir)) out << path.string() << '\n';
  return kOk;
}

void add_inference_options(CLI::App* cmd, InferenceOptions& opt) {
  cmd->add_option("input", opt.input, "CSV input file ('-' for stdin)")->required();
  cmd->add_option("--kind", opt.kind, "Input schema: raw (group,value) or summary (group,n,mean,sd); default: from header");
  cmd->add_option("--method", opt.method, "mslr, slr, gv1, gv2, gv3, a comma list, or all")->capture_default_str();
  cmd->add_option("--draws", opt.draws, "Pivotal draws for gv methods")->capture_default_str();
  cmd->add_option("--seed", opt.seed, "Seed for pivotal draws (fallback: CVINFER_SEED, then 42)");
  cmd->add_option("--gv1-variant", opt.gv1_variant, "GV1 normal-term scaling: sqrt-n or as-printed")
      ->capture_default_str();
  cmd->add_option("--format", opt.format, "Output format")
      ->check(CLI::IsMember({"text", "csv", "json"}))
      ->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Inference for the common coefficient of variation of normal populations", "cvinfer"};
  app.require_subcommand(1);

  InferenceOptions ci_opt;
  auto* ci = app.add_subcommand("ci", "Confidence intervals for the common CV");
  add_inference_options(ci, ci_opt);
  ci->add_option("--level", ci_opt.level, "Confidence level")->capture_default_str();

  InferenceOptions test_opt;
  double tau0 = 0.0;
  auto* test = app.add_subcommand("test", "Two-sided test of H0: tau = tau0");
  add_inference_options(test, test_opt);
  test->add_option("--tau0", tau0, "Hypothesised common CV")->required();

  SimulateOptions sim_opt;
  auto* sim = app.add_subcommand("simulate", "Coverage / expected-length Monte Carlo study");
  sim->add_option("--scenario", sim_opt.scenario_file, "Scenario JSON file");
  sim->add_option("--builtin", sim_opt.builtin, "Published design: table1 ... table6 or all");
  sim->add_option("--reps", sim_opt.reps, "Replications per scenario (overrides the file)");
  sim->add_option("--seed", sim_opt.seed, "Master seed (fallback: CVINFER_SEED, then 42)");
  sim->add_option("--threads", sim_opt.threads, "Worker threads")->capture_default_str();
  sim->add_option("--out", sim_opt.out, "Output file (default: stdout)");
  sim->add_option("--format", sim_opt.format, "csv or markdown")->capture_default_str();
  sim->add_option("--gv1-variant", sim_opt.gv1_variant, "GV1 normal-term scaling: sqrt-n or as-printed");
  sim->add_option("--gpv-draws", sim_opt.gpv_draws, "Pivotal draws per replication");
  sim->add_option("--methods", sim_opt.methods, "Methods to score")->delimiter(',');
  sim->add_flag("--quiet", sim_opt.quiet, "No progress output");

  std::string fixture_dir = "fixtures";
  auto* fix = app.add_subcommand("fixtures", "Write the bundled example datasets as CSV");
  fix->add_option("--dir", fixture_dir, "Output directory")->capture_default_str();

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.emplace_back("cvinfer");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kDataError;
  }

  try {
    if (ci->parsed()) return cmd_ci(ci_opt, in, out, err);
    if (test->parsed()) return cmd_test(test_opt, tau0, in, out, err);
    if (sim->parsed()) return cmd_simulate(sim_opt, out, err);
    if (fix->parsed()) return cmd_fixtures(fixture_dir, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_numerical(e.kind()) ? kNumericalError : kDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kDataError;
}

}  // namespace cvinfer::cli
