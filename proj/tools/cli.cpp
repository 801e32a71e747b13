#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wamls/bounds.hpp"
#include "wamls/driver.hpp"
#include "wamls/errors.hpp"
#include "wamls/families.hpp"
#include "wamls/harness.hpp"
#include "wamls/oracles.hpp"
#include "wamls/problems.hpp"
#include "wamls/weighted.hpp"

namespace wamls::cli {

namespace {

// Where a command gets its weighted universe from: exactly one of these.
struct WeightSource {
  int n = -1;  // uniform weights 1
  std::vector<Weight> weights;
  std::string instance;

  void add_options(CLI::App* cmd) {
    auto* n_opt = cmd->add_option("--n", n, "Universe size with uniform weights 1")->check(CLI::Range(0, kMaxUniverse));
    auto* w_opt = cmd->add_option("--weights", weights, "Comma-separated element weights (each >= 1)")->delimiter(',');
    auto* i_opt = cmd->add_option("--instance", instance, "Instance file whose weights define the universe");
    n_opt->excludes(w_opt)->excludes(i_opt);
    w_opt->excludes(i_opt);
  }

  Weights load() const;
};

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot open '" + path + "' for writing");
  return out;
}

Instance load_instance(const std::string& path) {
  std::ifstream in = open_in(path);
  return parse_instance(in);
}

Weights WeightSource::load() const {
  if (!instance.empty()) return weights_of(load_instance(instance));
  if (!weights.empty()) {
    for (Weight w : weights) {
      if (w < 1) throw DomainError("weights must be >= 1");
    }
    return weights;
  }
  if (n >= 0) return Weights(static_cast<std::size_t>(n), 1);
  throw DomainError("one of --n, --weights or --instance is required");
}

std::string elements_text(Subset s) {
  std::string out = "{";
  bool first = true;
  s.for_each([&](int u) {
    out += (first ? "" : ",") + std::to_string(u + 1);
    first = false;
  });
  return out + "}";
}

// ---------------------------------------------------------------- bound

struct BoundArgs {
  double alpha = 1.0;
  double c = 1.0;
  double beta = 1.0;
  double precision = 1e-6;
  std::string format = "text";
};

int cmd_bound(const BoundArgs& a, std::ostream& out) {
  const BoundParams params{a.alpha, a.c, a.beta, a.precision};
  params.validate();
  const std::vector<BoundParams> rows{params};
  const std::vector<BoundRow> table = bound_table(rows);
  const BoundRow& row = table.front();
  if (a.format == "text") {
    out << std::setprecision(7) << "alpha = " << a.alpha << ", c = " << a.c << ", beta = " << a.beta << '\n'
        << std::fixed << "brute = " << row.brute << '\n'
        << "amls = " << row.amls.value << " +/- " << std::scientific << std::setprecision(2) << row.amls.err_bound
        << '\n'
        << std::fixed << std::setprecision(6) << "kappa* = " << row.amls.kappa_star
        << ", tau* = " << row.amls.tau_star << '\n';
  } else {
    write_bound_table(out, table, a.format == "csv" ? TableFormat::csv : TableFormat::json);
  }
  return kOk;
}

// ---------------------------------------------------------------- table

struct TableArgs {
  std::string preset;
  std::vector<double> alphas;
  std::vector<double> cs;
  std::vector<double> betas;
  double precision = 1e-6;
  std::string format = "csv";
  std::string out_path;
};

int cmd_table(const TableArgs& a, std::ostream& out) {
  std::vector<BoundParams> rows;
  if (!a.preset.empty()) {
    rows = preset_rows(table_preset(a.preset), a.precision);
  } else {
    const std::vector<double> cs = a.cs.empty() ? std::vector<double>{1.0} : a.cs;
    for (double alpha : a.alphas) {
      for (double c : cs) {
        for (double beta : a.betas) rows.push_back({alpha, c, beta, a.precision});
      }
    }
    if (rows.empty()) throw DomainError("empty grid: give --preset or non-empty --alpha and --beta lists");
  }
  const std::vector<BoundRow> table = bound_table(rows);
  const TableFormat format = a.format == "json" ? TableFormat::json : TableFormat::csv;
  if (a.out_path.empty()) {
    write_bound_table(out, table, format);
  } else {
    std::ofstream file = open_out(a.out_path);
    write_bound_table(file, table, format);
    out << "wrote " << table.size() << " rows to " << a.out_path << '\n';
  }
  return kOk;
}

// ---------------------------------------------------------------- family

struct FamilyBuildArgs {
  std::string kind = "extension";
  WeightSource source;
  double alpha = 2.0;
  double c = 1.0;
  double beta = 1.5;
  double eps = 0.05;
  std::string mode = "schedule";
  int cap = family_cap();
  bool skip_check = false;
  std::string out_path;
};

int cmd_family_build(const FamilyBuildArgs& a, std::ostream& out, std::ostream& err) {
  const Weights w = a.source.load();
  const ConstructionOptions options{a.cap, !a.skip_check};
  std::ostringstream dump;
  std::ostringstream summary;
  if (a.kind == "covering") {
    const WeightedCoveringReport r = build_weighted_covering(w, a.alpha, covering_mode_from_string(a.mode), options);
    write_family(dump, r.family, {r.schedule.describe()});
    summary << "covering n=" << w.size() << " alpha=" << a.alpha << " size=" << r.family.sets.size()
            << " verified=" << (r.verified ? "yes" : "skipped") << '\n';
  } else {
    const WeightedExtensionReport r = build_weighted_extension(w, a.alpha, a.c, a.beta, a.eps, options);
    std::ostringstream cost;
    cost << std::setprecision(12) << "cost_log=" << r.cost_log;
    write_family(dump, r.family, {r.schedule.describe(), cost.str()});
    summary << "extension n=" << w.size() << " alpha=" << a.alpha << " c=" << a.c << " beta=" << a.beta
            << " size=" << r.family.entries.size() << ' ' << cost.str()
            << " verified=" << (r.verified ? "yes" : "skipped") << '\n';
  }
  if (a.out_path.empty()) {
    out << dump.str();
    err << summary.str();
  } else {
    std::ofstream file = open_out(a.out_path);
    file << dump.str();
    out << summary.str();
  }
  return kOk;
}

struct FamilyVerifyArgs {
  std::string in_path;
  WeightSource source;
  int cap = family_cap();
};

int cmd_family_verify(const FamilyVerifyArgs& a, std::ostream& out) {
  std::ifstream in = open_in(a.in_path);
  const AnyFamily family = read_family(in);
  const Weights w = a.source.load();
  const int n = std::visit([](const auto& f) { return f.universe_size; }, family);
  if (n != static_cast<int>(w.size())) {
    throw DomainError("family is over n=" + std::to_string(n) + " but " + std::to_string(w.size()) +
                      " weights were given");
  }
  const bool covering = std::holds_alternative<CoveringFamily>(family);
  const Verdict v = covering ? verify_covering(std::get<CoveringFamily>(family), w, a.cap)
                             : verify_extension(std::get<ExtensionFamily>(family), w, a.cap);
  if (v.pass) {
    out << "pass: " << (covering ? "covering" : "extension") << " family over n=" << n << " checked on all 2^" << n
        << " subsets\n";
    return kOk;
  }
  out << "fail: witness S=" << to_hex(*v.witness) << ' ' << elements_text(*v.witness) << '\n';
  return kVerificationFailed;
}

// ---------------------------------------------------------------- solve

struct SolveArgs {
  std::string instance_path;
  std::string random_tag;
  int n = 12;
  double density = 0.3;
  int d = 3;
  std::int64_t threshold = 1;
  Weight min_weight = 1;
  Weight max_weight = 100;
  std::uint64_t seed = 0;

  std::string model = "extension";
  std::string oracle = "exact";
  double beta = 1.5;
  double eps = 0.05;
  double exact_c = 2.0;
  std::string mode = "schedule";
  int cap = family_cap();
  bool skip_family_check = false;
  bool no_verify = false;
  std::string report_path;
  std::string ledger_path;
};

int cmd_solve(const SolveArgs& a, std::ostream& out, std::ostream& err) {
  Instance instance;
  if (!a.instance_path.empty()) {
    instance = load_instance(a.instance_path);
  } else if (!a.random_tag.empty()) {
    RandomInstanceSpec spec;
    spec.kind = problem_kind_from_tag(a.random_tag);
    spec.n = a.n;
    spec.density = a.density;
    spec.d = a.d;
    spec.threshold = a.threshold;
    spec.min_weight = a.min_weight;
    spec.max_weight = a.max_weight;
    spec.seed = a.seed;
    instance = random_instance(spec);
  } else {
    throw DomainError("one of --instance or --random is required");
  }

  const DriverOptions options{a.cap, !a.skip_family_check, a.seed};
  RunReport report;
  double target = a.beta;
  if (a.model == "membership") {
    report = approximate_membership(instance, a.beta, covering_mode_from_string(a.mode), options);
  } else {
    ExtensionOracleHandle oracle = wrap_with_ledger(make_oracle(a.oracle, instance, a.exact_c));
    report = approximate_extension(instance, oracle, a.beta, a.eps, options);
  }

  int code = kOk;
  if (!a.no_verify) {
    const RunVerdict verdict = verify_run(instance, report, target);
    attach_verdict(report, verdict);
    if (!verdict.pass) {
      err << "verification failed: " << verdict.message << '\n';
      code = kVerificationFailed;
    }
  }

  const std::string json = report_json(report);
  out << json << '\n';
  if (!a.report_path.empty()) open_out(a.report_path) << json << '\n';
  if (!a.ledger_path.empty()) {
    std::ofstream ledger = open_out(a.ledger_path);
    report.ledger.write_json_lines(ledger);
  }
  return code;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  std::string suite = "all";
  HarnessOptions options;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  const std::vector<CriterionResult> results = run_suite(a.suite, a.options, &out);
  int passed = 0;
  for (const CriterionResult& r : results) passed += r.pass ? 1 : 0;
  out << "summary: " << passed << '/' << results.size() << " criteria passed\n";
  return passed == static_cast<int>(results.size()) ? kOk : kVerificationFailed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weighted approximate monotone local search: running-time bounds, covering and extension "
               "families, and approximation drivers.",
               "wamls"};
  app.set_help_flag("-h,--help", "Print help for every subcommand and flag, then exit");
  app.require_subcommand(1);

  BoundArgs bound;
  auto* bound_cmd = app.add_subcommand("bound", "Print brute(beta) and amls(alpha, c, beta) with its error bound");
  bound_cmd->add_option("--alpha", bound.alpha, "Oracle approximation factor (>= 1)")->required();
  bound_cmd->add_option("--c", bound.c, "Per-query cost base (>= 1)")->capture_default_str();
  bound_cmd->add_option("--beta", bound.beta, "Target approximation factor (>= 1)")->required();
  bound_cmd->add_option("--precision", bound.precision, "Absolute tolerance on amls")->capture_default_str();
  bound_cmd->add_option("--format", bound.format, "Output format")
      ->check(CLI::IsMember({"text", "csv", "json"}))
      ->capture_default_str();

  TableArgs table;
  auto* table_cmd = app.add_subcommand("table", "Bound table for a preset or a custom (alpha x c x beta) grid");
  auto* preset_opt = table_cmd->add_option("--preset", table.preset, "Preset: vc, fvs, tfvs, 3hs, 4hs, 5hs")
                         ->check(CLI::IsMember({"vc", "fvs", "tfvs", "3hs", "4hs", "5hs"}));
  auto* alpha_list = table_cmd->add_option("--alpha", table.alphas, "Comma-separated alpha grid")->delimiter(',');
  auto* c_list = table_cmd->add_option("--c", table.cs, "Comma-separated c grid (default 1)")->delimiter(',');
  auto* beta_list = table_cmd->add_option("--beta", table.betas, "Comma-separated beta grid")->delimiter(',');
  preset_opt->excludes(alpha_list)->excludes(c_list)->excludes(beta_list);
  table_cmd->add_option("--precision", table.precision, "Absolute tolerance on amls")->capture_default_str();
  table_cmd->add_option("--format", table.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  table_cmd->add_option("--out", table.out_path, "Write the table here instead of stdout");

  auto* family_cmd = app.add_subcommand("family", "Build or verify covering / extension families");
  family_cmd->require_subcommand(1);

  FamilyBuildArgs build;
  auto* build_cmd = family_cmd->add_subcommand("build", "Construct a weighted family and dump it");
  build_cmd->add_option("--kind", build.kind, "Family kind")
      ->check(CLI::IsMember({"covering", "extension"}))
      ->capture_default_str();
  build.source.add_options(build_cmd);
  build_cmd->add_option("--alpha", build.alpha, "Covering factor, or oracle factor for extension families")
      ->capture_default_str();
  build_cmd->add_option("--c", build.c, "Per-query cost base (extension)")->capture_default_str();
  build_cmd->add_option("--beta", build.beta, "Target factor (extension)")->capture_default_str();
  build_cmd->add_option("--eps", build.eps, "Slack over amls(alpha, c, beta) (extension)")->capture_default_str();
  build_cmd->add_option("--mode", build.mode, "Covering schedule")
      ->check(CLI::IsMember({"schedule", "fixed", "exhaustive"}))
      ->capture_default_str();
  build_cmd->add_option("--cap", build.cap, "Largest universe to enumerate")->capture_default_str();
  build_cmd->add_flag("--skip-check", build.skip_check, "Do not verify the family exhaustively");
  build_cmd->add_option("--out", build.out_path, "Dump path (default stdout, summary to stderr)");

  FamilyVerifyArgs verify_family;
  auto* fverify_cmd = family_cmd->add_subcommand("verify", "Check a dumped family against every subset");
  fverify_cmd->add_option("--in", verify_family.in_path, "Family dump")->required();
  verify_family.source.add_options(fverify_cmd);
  fverify_cmd->add_option("--cap", verify_family.cap, "Largest universe to enumerate")->capture_default_str();

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Approximate a weighted instance and print a JSON run report");
  auto* inst_opt = solve_cmd->add_option("--instance", solve.instance_path, "Instance file");
  auto* rand_opt = solve_cmd->add_option("--random", solve.random_tag, "Generate a random instance: wvc, whs, wfvs, wpvc")
                       ->check(CLI::IsMember({"wvc", "whs", "wfvs", "wpvc"}));
  inst_opt->excludes(rand_opt);
  solve_cmd->add_option("--n", solve.n, "Random instance size")->check(CLI::Range(0, kMaxUniverse))->capture_default_str();
  solve_cmd->add_option("--density", solve.density, "Random edge probability / set density")->capture_default_str();
  solve_cmd->add_option("--d", solve.d, "Random hitting set arity")->capture_default_str();
  solve_cmd->add_option("--threshold", solve.threshold, "Random partial vertex cover threshold")->capture_default_str();
  solve_cmd->add_option("--min-weight", solve.min_weight, "Random weight lower bound")->capture_default_str();
  solve_cmd->add_option("--max-weight", solve.max_weight, "Random weight upper bound")->capture_default_str();
  solve_cmd->add_option("--seed", solve.seed, "Random seed (echoed in the report)")->capture_default_str();
  solve_cmd->add_option("--model", solve.model, "Oracle model")
      ->check(CLI::IsMember({"extension", "membership"}))
      ->capture_default_str();
  solve_cmd->add_option("--oracle", solve.oracle, "Extension oracle: exact, branching, local-ratio")
      ->capture_default_str();
  solve_cmd->add_option("--beta", solve.beta, "Target factor (the covering factor in the membership model)")
      ->capture_default_str();
  solve_cmd->add_option("--eps", solve.eps, "Slack over amls(alpha, c, beta)")->capture_default_str();
  solve_cmd->add_option("--exact-c", solve.exact_c, "Declared c of the exact oracle")->capture_default_str();
  solve_cmd->add_option("--mode", solve.mode, "Covering schedule (membership model)")
      ->check(CLI::IsMember({"schedule", "fixed", "exhaustive"}))
      ->capture_default_str();
  solve_cmd->add_option("--cap", solve.cap, "Largest universe for family construction")->capture_default_str();
  solve_cmd->add_flag("--skip-family-check", solve.skip_family_check, "Do not verify the family exhaustively");
  solve_cmd->add_flag("--no-verify", solve.no_verify, "Do not compare against the exhaustive optimum");
  solve_cmd->add_option("--report", solve.report_path, "Also write the JSON report here");
  solve_cmd->add_option("--ledger", solve.ledger_path, "Write per-query ledger JSON lines here");

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "Run acceptance suites and print one line per criterion");
  verify_cmd->add_option("--suite", verify.suite, "Suite: bounds, families, oracles, end-to-end, all")
      ->check(CLI::IsMember({"bounds", "families", "oracles", "end-to-end", "all"}))
      ->capture_default_str();
  verify_cmd->add_option("--max-n", verify.options.max_n, "Largest random instance")
      ->check(CLI::Range(1, 20))
      ->capture_default_str();
  verify_cmd->add_option("--trials", verify.options.trials, "End-to-end vertex cover instances")
      ->check(CLI::Range(1, 100000))
      ->capture_default_str();
  verify_cmd->add_option("--seed", verify.options.seed, "Base seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    if (!app.get_subcommands().empty()) {
      out << app.help();
      return kOk;
    }
    // The all-subcommands format stops one level down; add the nested ones.
    out << app.help("", CLI::AppFormatMode::All);
    for (const CLI::App* nested : {build_cmd, fverify_cmd}) out << '\n' << nested->help("wamls family");
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    if (*bound_cmd) return cmd_bound(bound, out);
    if (*table_cmd) return cmd_table(table, out);
    if (*build_cmd) return cmd_family_build(build, out, err);
    if (*fverify_cmd) return cmd_family_verify(verify_family, out);
    if (*solve_cmd) return cmd_solve(solve, out, err);
    if (*verify_cmd) return cmd_verify(verify, out);
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << '\n';
    return kResourceCap;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const wamls::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kVerificationFailed;
  }
  return kUsageError;
}

}  // namespace wamls::cli
