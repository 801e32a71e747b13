#include "wamls/harness.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "wamls/bounds.hpp"
#include "wamls/driver.hpp"
#include "wamls/errors.hpp"
#include "wamls/families.hpp"
#include "wamls/log_sum.hpp"
#include "wamls/oracles.hpp"
#include "wamls/problems.hpp"
#include "wamls/weighted.hpp"

namespace wamls {

namespace {

std::vector<double> beta_grid(double first, double step) {
  std::vector<double> out;
  for (int i = 0; i < 9; ++i) out.push_back(std::round((first + step * i) * 1e9) / 1e9);
  return out;
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

template <typename Body>
CriterionResult timed(int id, std::string name, Body&& body) {
  CriterionResult result;
  result.id = id;
  result.name = std::move(name);
  const auto start = Clock::now();
  try {
    body(result);
  } catch (const std::exception& e) {
    result.pass = false;
    result.detail += std::string(result.detail.empty() ? "" : "; ") + "exception: " + e.what();
  }
  result.seconds = seconds_since(start);
  return result;
}

std::string fmt(double x, int digits = 6) {
  std::ostringstream os;
  os << std::setprecision(digits) << x;
  return os.str();
}

Instance make_random(ProblemKind kind, int n, std::uint64_t seed) {
  RandomInstanceSpec spec;
  spec.kind = kind;
  spec.n = n;
  spec.density = 0.3;
  spec.min_weight = 1;
  spec.max_weight = 100;
  spec.d = 3;
  spec.seed = seed;
  return random_instance(spec);
}

Weights random_weights(int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<Weight> dist(1, 100);
  Weights w(static_cast<std::size_t>(n));
  for (Weight& x : w) x = dist(rng);
  return w;
}

}  // namespace

const std::vector<ReferenceRow>& reference_rows() {
  static const std::vector<ReferenceRow> rows = {
      {"vc", 1.0, std::nullopt, beta_grid(1.1, 0.1),
       {1.716, 1.583, 1.496, 1.433, 1.385, 1.347, 1.317, 1.291, 1.269}},
      {"vc", 1.0, 1.363, beta_grid(1.1, 0.1), {1.158, 1.123, 1.103, 1.089, 1.078, 1.07, 1.064, 1.058, 1.054}},
      {"vc", 2.0, 1.0, beta_grid(1.1, 0.1), {1.659, 1.485, 1.366, 1.277, 1.208, 1.151, 1.104, 1.064, 1.03}},
      {"fvs", 1.0, 3.618, beta_grid(1.1, 0.1), {1.489, 1.39, 1.327, 1.283, 1.25, 1.225, 1.204, 1.187, 1.172}},
      {"tfvs", 1.0, std::nullopt, beta_grid(1.2, 0.2),
       {1.583, 1.433, 1.347, 1.291, 1.25, 1.22, 1.196, 1.177, 1.162}},
      {"tfvs", 1.0, 2.0, beta_grid(1.2, 0.2), {1.251, 1.181, 1.143, 1.119, 1.102, 1.089, 1.079, 1.071, 1.065}},
      {"tfvs", 3.0, 1.0, beta_grid(1.2, 0.2), {1.566, 1.393, 1.286, 1.211, 1.155, 1.111, 1.076, 1.047, 1.022}},
      {"3hs", 1.0, 2.168, beta_grid(1.2, 0.2), {1.274, 1.197, 1.156, 1.13, 1.111, 1.097, 1.086, 1.078, 1.071}},
      {"4hs", 1.0, std::nullopt, beta_grid(1.3, 0.3),
       {1.496, 1.347, 1.269, 1.22, 1.186, 1.162, 1.143, 1.128, 1.116}},
      {"4hs", 1.0, 3.168, beta_grid(1.3, 0.3), {1.305, 1.209, 1.16, 1.13, 1.11, 1.095, 1.084, 1.075, 1.068}},
      {"4hs", 4.0, 1.0, beta_grid(1.3, 0.3), {1.489, 1.325, 1.231, 1.168, 1.122, 1.087, 1.059, 1.036, 1.017}},
      {"5hs", 1.0, std::nullopt, beta_grid(1.4, 0.4), {1.433, 1.291, 1.22, 1.177, 1.149, 1.128, 1.112, 1.1, 1.09}},
      {"5hs", 1.0, 4.168, beta_grid(1.4, 0.4), {1.302, 1.199, 1.149, 1.12, 1.1, 1.086, 1.076, 1.067, 1.061}},
      {"5hs", 5.0, 1.0, beta_grid(1.4, 0.4), {1.43, 1.276, 1.193, 1.139, 1.101, 1.072, 1.048, 1.03, 1.014}},
  };
  return rows;
}

CriterionResult check_bound_reproduction(const HarnessOptions&) {
  return timed(1, "bound reproduction", [](CriterionResult& r) {
    constexpr double kTol = 0.002;
    int values = 0;
    int failures = 0;
    double worst = 0.0;
    double slowest = 0.0;
    std::string first_failure;
    for (const ReferenceRow& row : reference_rows()) {
      for (std::size_t i = 0; i < row.betas.size(); ++i) {
        const auto start = Clock::now();
        const double got = row.c ? amls_bound({row.alpha, *row.c, row.betas[i], 1e-6}).value
                                 : brute_bound(row.betas[i]);
        slowest = std::max(slowest, seconds_since(start));
        const double diff = std::abs(got - row.values[i]);
        worst = std::max(worst, diff);
        ++values;
        if (diff > kTol) {
          ++failures;
          if (first_failure.empty()) {
            first_failure = " first miss " + row.table + " beta=" + fmt(row.betas[i]) + " got " + fmt(got) +
                            " want " + fmt(row.values[i]);
          }
        }
      }
    }
    r.pass = failures == 0 && slowest < 1.0;
    r.detail = std::to_string(values) + " values, " + std::to_string(failures) + " outside 0.002, max |diff| " +
               fmt(worst, 3) + ", slowest " + fmt(slowest, 3) + " s" + first_failure;
  });
}

CriterionResult check_closed_form_anchors(const HarnessOptions&) {
  return timed(2, "closed-form anchors", [](CriterionResult& r) {
    const double b1 = brute_bound(1.0);
    const double b2 = brute_bound(2.0);
    r.pass = std::abs(b1 - 2.0) <= 1e-9 && std::abs(b2 - 1.25) <= 1e-9;
    r.detail = "brute(1)=" + fmt(b1, 12) + " brute(2)=" + fmt(b2, 12);
  });
}

CriterionResult check_dominance(const HarnessOptions&) {
  return timed(3, "dominance amls < brute", [](CriterionResult& r) {
    int points = 0;
    int violations = 0;
    int boundary = 0;
    double min_margin = 1e300;
    for (double alpha : {1.0, 1.5, 2.0, 3.0}) {
      for (double c : {1.0, 1.363, 2.0, 3.618}) {
        for (double beta : {1.1, 1.5, 2.0, 2.5}) {
          ++points;
          const double a = amls_bound({alpha, c, beta, 1e-7}).value;
          const double margin = brute_bound(beta) - a;
          if (a <= 1.0 + 1e-9) {
            ++boundary;
            if (margin < 0.0) ++violations;
            continue;
          }
          min_margin = std::min(min_margin, margin);
          if (margin < 1e-6) ++violations;
        }
      }
    }
    r.pass = violations == 0;
    r.detail = std::to_string(points) + " grid points, " + std::to_string(violations) + " violations, " +
               std::to_string(boundary) + " amls=1 boundary cases, min margin " + fmt(min_margin, 4);
  });
}

CriterionResult check_shape(const HarnessOptions& options) {
  return timed(4, "convexity/concavity shape", [&](CriterionResult& r) {
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> alpha_dist(1.0, 4.0), c_dist(1.0, 4.0), beta_dist(1.05, 3.0);
    int failures = 0;
    double worst_convex = 0.0, worst_concave = 0.0;
    for (int i = 0; i < 20; ++i) {
      const BoundParams p{alpha_dist(rng), c_dist(rng), beta_dist(rng), 1e-6};
      const ShapeReport s = shape_check(p, 200);
      worst_convex = std::max(worst_convex, s.max_convexity_violation);
      worst_concave = std::max(worst_concave, s.max_concavity_violation);
      if (!s.pass) ++failures;
    }
    r.pass = failures == 0;
    r.detail = "20 tuples on 200-point grids, " + std::to_string(failures) + " failures, worst convexity " +
               fmt(worst_convex, 3) + ", worst concavity " + fmt(worst_concave, 3);
  });
}

CriterionResult check_family_validity(const HarnessOptions& options) {
  return timed(5, "family validity", [&](CriterionResult& r) {
    std::mt19937_64 rng(options.seed + 5);
    const int max_n = std::min(options.max_n, 10);
    const ConstructionOptions no_self_check{family_cap(), false};
    int covering = 0, extension = 0, failures = 0;
    std::string first_failure;
    const auto fail = [&](const std::string& what) {
      ++failures;
      if (first_failure.empty()) first_failure = "; first failure " + what;
    };
    for (int trial = 0; trial < 50; ++trial) {
      const int n = 1 + trial % max_n;
      const Weights w = random_weights(n, rng);
      for (double alpha : {1.5, 2.0, 3.0}) {
        ++covering;
        const WeightedCoveringReport cov = build_weighted_covering(w, alpha, CoveringMode::schedule, no_self_check);
        if (!verify_covering(cov.family, w).pass) fail("covering n=" + std::to_string(n) + " alpha=" + fmt(alpha));
      }
      for (double alpha : {1.0, 2.0}) {
        for (double beta : {1.3, 1.7, 2.0}) {
          for (double c : {1.0, 2.0}) {
            ++extension;
            const WeightedExtensionReport ext = build_weighted_extension(w, alpha, c, beta, 0.05, no_self_check);
            if (!verify_extension(ext.family, w).pass) {
              fail("extension n=" + std::to_string(n) + " alpha=" + fmt(alpha) + " beta=" + fmt(beta));
            }
          }
        }
      }
    }
    r.pass = failures == 0;
    r.detail = std::to_string(covering) + " covering + " + std::to_string(extension) +
               " extension families verified exhaustively, " + std::to_string(failures) + " failures" +
               first_failure;
  });
}

CriterionResult check_end_to_end(const HarnessOptions& options) {
  return timed(6, "end-to-end ratio soundness", [&](CriterionResult& r) {
    struct Plan {
      ProblemKind kind;
      int trials;
      int max_n;
    };
    const std::vector<Plan> plans = {
        {ProblemKind::vertex_cover, options.trials, options.max_n},
        {ProblemKind::hitting_set, options.trials / 2, std::min(options.max_n, 10)},
        {ProblemKind::feedback_vertex_set, options.trials / 2, std::min(options.max_n, 10)},
    };
    long runs = 0, ratio_violations = 0, non_solutions = 0;
    double worst_ratio = 0.0;
    std::string first_failure;
    for (const Plan& plan : plans) {
      const int span = std::max(1, plan.max_n - 3);
      for (int trial = 0; trial < plan.trials; ++trial) {
        const int n = std::min(plan.max_n, 4 + trial % span);
        const Instance inst = make_random(plan.kind, n, options.seed * 1000003 + static_cast<std::uint64_t>(trial));
        const Weight opt = exact_opt(inst).weight;
        for (const std::string& name : oracle_names(plan.kind)) {
          for (double beta : {1.2, 1.5, 1.9}) {
            ExtensionOracleHandle oracle = wrap_with_ledger(make_oracle(name, inst));
            const RunReport report = approximate_extension(inst, oracle, beta, 0.05, {family_cap(), false, 0});
            ++runs;
            if (!is_solution(inst, report.output_set)) {
              ++non_solutions;
            } else if (static_cast<double>(report.output_weight) > beta * static_cast<double>(opt) * (1 + 1e-12)) {
              ++ratio_violations;
            } else {
              if (opt > 0) worst_ratio = std::max(worst_ratio, static_cast<double>(report.output_weight) / opt);
              continue;
            }
            if (first_failure.empty()) {
              first_failure = "; first failure " + problem_tag(plan.kind) + " trial " + std::to_string(trial) +
                              " oracle " + name + " beta " + fmt(beta);
            }
          }
        }
      }
    }
    r.pass = ratio_violations == 0 && non_solutions == 0;
    r.detail = std::to_string(runs) + " runs, " + std::to_string(ratio_violations) + " ratio violations, " +
               std::to_string(non_solutions) + " non-solutions, worst output/OPT " + fmt(worst_ratio, 4) +
               first_failure;
  });
}

CriterionResult check_oracle_contracts(const HarnessOptions& options) {
  return timed(7, "oracle contracts", [&](CriterionResult& r) {
    std::mt19937_64 rng(options.seed + 7);
    const ProblemKind kinds[] = {ProblemKind::vertex_cover, ProblemKind::hitting_set,
                                 ProblemKind::feedback_vertex_set};
    const int max_n = std::min(options.max_n, 10);
    long checks = 0, infeasible = 0, over_alpha = 0, disagreements = 0;
    std::string first_failure;
    for (int i = 0; i < 50; ++i) {
      const ProblemKind kind = kinds[i % 3];
      const int n = std::min(max_n, 4 + i % 7);
      const Instance inst = make_random(kind, n, options.seed * 7919 + static_cast<std::uint64_t>(i));
      const Weights& w = weights_of(inst);
      const ExactExtensionOracle exact(inst);
      std::vector<std::unique_ptr<ExtensionOracle>> oracles;
      for (const std::string& name : oracle_names(kind)) oracles.push_back(make_oracle(name, inst));

      std::uniform_int_distribution<int> budget_dist(0, n);
      std::bernoulli_distribution member(0.3);
      for (int q = 0; q < 100; ++q) {
        Subset s;
        for (int u = 0; u < n; ++u) {
          if (member(rng)) s.insert(u);
        }
        const int budget = budget_dist(rng);
        const Subset best = exact.extend(s, budget);
        const bool finite = best.size() <= budget;
        for (const auto& oracle : oracles) {
          ++checks;
          const Subset x = oracle->extend(s, budget);
          std::string problem;
          if (!is_solution(inst, s | x)) {
            ++infeasible;
            problem = "infeasible";
          } else if (finite) {
            const double wx = static_cast<double>(weight_of(x, w));
            const double wb = static_cast<double>(weight_of(best, w));
            if (wx > oracle->declared_alpha() * wb + 1e-9) {
              ++over_alpha;
              problem = "weight above alpha bound";
            } else if (oracle->declared_alpha() == 1.0 && wx != wb) {
              ++disagreements;
              problem = "disagrees with exact oracle";
            }
          }
          if (!problem.empty() && first_failure.empty()) {
            first_failure = "; first failure " + problem_tag(kind) + " instance " + std::to_string(i) + " oracle " +
                            oracle->name() + " S=" + to_hex(s) + " l=" + std::to_string(budget) + ": " + problem;
          }
        }
      }
    }
    r.pass = infeasible == 0 && over_alpha == 0 && disagreements == 0;
    r.detail = std::to_string(checks) + " (S, l) queries, " + std::to_string(infeasible) + " infeasible, " +
               std::to_string(over_alpha) + " above declared alpha, " + std::to_string(disagreements) +
               " exact disagreements" + first_failure;
  });
}

CriterionResult check_exhaustive_membership(const HarnessOptions& options) {
  return timed(8, "exhaustive membership exactness", [&](CriterionResult& r) {
    const ProblemKind kinds[] = {ProblemKind::vertex_cover, ProblemKind::hitting_set,
                                 ProblemKind::feedback_vertex_set, ProblemKind::partial_vertex_cover};
    const int max_n = std::min(options.max_n, 10);
    int mismatches = 0;
    for (int i = 0; i < 50; ++i) {
      const ProblemKind kind = kinds[i % 4];
      const int n = 1 + i % max_n;
      RandomInstanceSpec spec;
      spec.kind = kind;
      spec.n = n;
      spec.seed = options.seed * 104729 + static_cast<std::uint64_t>(i);
      spec.threshold = 1 + i % 3;
      Instance inst = random_instance(spec);
      const ExactSolution opt = exact_opt(inst);
      const RunReport report = approximate_membership(inst, 1.0, CoveringMode::exhaustive, {family_cap(), false, 0});
      if (report.output_set != opt.set || report.output_weight != opt.weight) ++mismatches;
    }
    r.pass = mismatches == 0;
    r.detail = "50 instances, " + std::to_string(mismatches) + " differ from exact_opt";
  });
}

CriterionResult check_accounting(const HarnessOptions& options) {
  return timed(9, "cost accounting", [&](CriterionResult& r) {
    int runs = 0, mismatches = 0;
    double worst_rel = 0.0;
    const auto rel = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };
    for (int i = 0; i < 12; ++i) {
      const ProblemKind kind = i % 2 == 0 ? ProblemKind::vertex_cover : ProblemKind::hitting_set;
      const Instance inst = make_random(kind, 4 + i % 7, options.seed * 31 + static_cast<std::uint64_t>(i));
      for (const std::string& name : oracle_names(kind)) {
        for (double beta : {1.3, 1.9}) {
          ExtensionOracleHandle oracle = wrap_with_ledger(make_oracle(name, inst));
          const RunReport report = approximate_extension(inst, oracle, beta, 0.05, {family_cap(), false, 0});
          const WeightedExtensionReport family = build_weighted_extension(
              weights_of(inst), oracle.declared_alpha(), oracle.declared_c(), beta, 0.05, {family_cap(), false});
          const double expected = family_cost(family.family, oracle.declared_c());
          ++runs;
          double err = rel(report.cost_log, expected);
          if (oracle.declared_c() == 1.0) {
            err = std::max(err, rel(report.cost_log, std::log(static_cast<double>(report.family_size))));
          }
          std::vector<double> terms;
          for (const QueryRecord& q : report.ledger.queries()) terms.push_back(q.budget * std::log(report.c));
          err = std::max(err, rel(report.cost_log, log_sum_exp(terms)));
          worst_rel = std::max(worst_rel, err);
          if (err > 1e-9 || report.ledger.queries().size() != family.family.entries.size()) ++mismatches;
        }
      }
    }
    r.pass = mismatches == 0;
    r.detail = std::to_string(runs) + " runs, " + std::to_string(mismatches) +
               " ledger mismatches, worst relative error " + fmt(worst_rel, 3);
  });
}

CriterionResult check_determinism(const HarnessOptions& options) {
  return timed(10, "determinism", [&](CriterionResult& r) {
    const ProblemKind kinds[] = {ProblemKind::vertex_cover, ProblemKind::hitting_set,
                                 ProblemKind::feedback_vertex_set};
    int compared = 0, differing = 0;
    for (int i = 0; i < 6; ++i) {
      const std::uint64_t seed = options.seed + static_cast<std::uint64_t>(i);
      const auto run_once = [&]() {
        const Instance inst = make_random(kinds[i % 3], 10, seed);
        ExtensionOracleHandle oracle = wrap_with_ledger(make_oracle("local-ratio", inst));
        RunReport report = approximate_extension(inst, oracle, 1.5, 0.05, {family_cap(), true, seed});
        attach_verdict(report, verify_run(inst, report, 1.5));
        std::ostringstream ledger;
        report.ledger.write_json_lines(ledger);
        return report_json(report) + "\n" + ledger.str();
      };
      ++compared;
      if (run_once() != run_once()) ++differing;
    }
    r.pass = differing == 0;
    r.detail = std::to_string(compared) + " seeded runs repeated, " + std::to_string(differing) + " differ";
  });
}

std::vector<std::string> suite_names() { return {"bounds", "families", "oracles", "end-to-end", "all"}; }

std::vector<CriterionResult> run_suite(const std::string& suite, const HarnessOptions& options,
                                       std::ostream* progress) {
  using Check = std::function<CriterionResult(const HarnessOptions&)>;
  std::vector<Check> checks;
  const bool all = suite == "all";
  if (all || suite == "bounds") {
    checks.insert(checks.end(), {check_bound_reproduction, check_closed_form_anchors, check_dominance, check_shape});
  }
  if (all || suite == "families") checks.push_back(check_family_validity);
  if (all || suite == "end-to-end") checks.push_back(check_end_to_end);
  if (all || suite == "oracles") checks.push_back(check_oracle_contracts);
  if (all || suite == "end-to-end") {
    checks.insert(checks.end(), {check_exhaustive_membership, check_accounting, check_determinism});
  }
  if (checks.empty()) throw DomainError("unknown suite '" + suite + "'");

  std::vector<CriterionResult> results;
  for (const Check& check : checks) {
    results.push_back(check(options));
    if (progress != nullptr) *progress << format_result(results.back()) << std::endl;
  }
  return results;
}

std::string format_result(const CriterionResult& result) {
  std::ostringstream os;
  os << (result.pass ? "PASS" : "FAIL") << ' ' << std::setw(2) << result.id << ' ' << result.name << ": "
     << result.detail << " (" << std::fixed << std::setprecision(1) << result.seconds << " s)";
  return os.str();
}

}  // namespace wamls
