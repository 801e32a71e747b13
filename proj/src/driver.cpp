#include "wamls/driver.hpp"

#include <cmath>
#include <limits>

#include <json.hpp>

#include "wamls/errors.hpp"

namespace wamls {

namespace {

RunReport base_report(const Instance& instance, const std::string& model, const DriverOptions& options) {
  RunReport report;
  report.problem = problem_tag(kind_of(instance));
  report.model = model;
  report.n = universe_size(instance);
  report.seed = options.seed;
  return report;
}

}  // namespace

RunReport approximate_membership(const Instance& instance, double alpha, CoveringMode mode,
                                 const DriverOptions& options) {
  const Weights& w = weights_of(instance);
  const WeightedCoveringReport built = build_weighted_covering(w, alpha, mode, {options.cap, options.self_check});

  RunReport report = base_report(instance, "membership", options);
  report.oracle = "membership";
  report.alpha = alpha;
  report.beta = alpha;
  report.schedule = built.schedule;
  report.family_size = built.family.sets.size();

  std::optional<Subset> best;
  Weight best_weight = 0;
  MembershipOracle member(instance);
  for (Subset t : built.family.sets) {
    report.ledger.record(t.size(), 0);
    if (!member(t)) continue;
    const Weight wt = weight_of(t, w);
    if (!best || better_solution(t, wt, *best, best_weight)) {
      best = t;
      best_weight = wt;
    }
  }
  if (!best) throw std::logic_error("covering family has no solution member (U missing)");
  report.output_set = *best;
  report.output_weight = best_weight;
  report.cost_log = report.ledger.cost_log();
  return report;
}

RunReport approximate_extension(const Instance& instance, ExtensionOracleHandle& oracle, double beta, double eps,
                                const DriverOptions& options) {
  const Weights& w = weights_of(instance);
  const WeightedExtensionReport built = build_weighted_extension(
      w, oracle.declared_alpha(), oracle.declared_c(), beta, eps, {options.cap, options.self_check});

  RunReport report = base_report(instance, "extension", options);
  report.oracle = oracle.name();
  report.alpha = oracle.declared_alpha();
  report.c = oracle.declared_c();
  report.beta = beta;
  report.eps = eps;
  report.schedule = built.schedule;
  report.family_size = built.family.entries.size();

  const QueryLedger before = oracle.ledger();
  std::optional<Subset> best;
  Weight best_weight = 0;
  for (const ExtensionEntry& entry : built.family.entries) {
    const Subset x = oracle.extend(entry.set, entry.budget);
    const Subset candidate = entry.set | x;
    if (!is_solution(instance, candidate)) {
      throw OracleContractError("oracle '" + oracle.name() + "' returned a non-completion for T = " +
                                to_hex(entry.set) + ", l = " + std::to_string(entry.budget));
    }
    const Weight wc = weight_of(candidate, w);
    if (!best || better_solution(candidate, wc, *best, best_weight)) {
      best = candidate;
      best_weight = wc;
    }
  }
  if (!best) throw std::logic_error("extension family is empty");
  report.output_set = *best;
  report.output_weight = best_weight;

  // Only this run's queries, even if the handle was used before.
  QueryLedger mine(oracle.declared_c());
  const auto& all = oracle.ledger().queries();
  for (std::size_t i = before.queries().size(); i < all.size(); ++i) mine.record(all[i].size_s, all[i].budget);
  report.ledger = mine;
  report.cost_log = mine.cost_log();
  return report;
}

RunVerdict verify_run(const Instance& instance, const RunReport& report, double target_factor, int cap) {
  RunVerdict verdict;
  verdict.message = "ok";
  if (!is_solution(instance, report.output_set) ||
      weight_of(report.output_set, weights_of(instance)) != report.output_weight) {
    verdict.pass = false;
    verdict.message = "not a solution";
    return verdict;
  }
  if (universe_size(instance) > cap) return verdict;

  const ExactSolution opt = exact_opt(instance, cap);
  verdict.opt_weight = opt.weight;
  if (opt.weight > 0) {
    verdict.achieved_ratio = static_cast<double>(report.output_weight) / static_cast<double>(opt.weight);
  } else {
    verdict.achieved_ratio = report.output_weight == 0 ? 1.0 : std::numeric_limits<double>::infinity();
  }
  const double limit = target_factor * static_cast<double>(opt.weight);
  if (static_cast<double>(report.output_weight) > limit * (1.0 + 1e-12)) {
    verdict.pass = false;
    verdict.message = "ratio exceeded";
  }
  return verdict;
}

void attach_verdict(RunReport& report, const RunVerdict& verdict) {
  report.opt_weight = verdict.opt_weight;
  report.achieved_ratio = verdict.achieved_ratio;
}

std::string report_json(const RunReport& report) {
  nlohmann::ordered_json j;
  j["problem"] = report.problem;
  j["model"] = report.model;
  j["oracle"] = report.oracle;
  j["n"] = report.n;
  j["alpha"] = report.alpha;
  j["c"] = report.c;
  j["beta"] = report.beta;
  j["eps"] = report.eps;
  j["output_weight"] = report.output_weight;
  j["opt_weight"] = report.opt_weight ? nlohmann::ordered_json(*report.opt_weight) : nlohmann::ordered_json();
  j["ratio"] = report.achieved_ratio ? nlohmann::ordered_json(*report.achieved_ratio) : nlohmann::ordered_json();
  j["family_size"] = report.family_size;
  j["cost_log"] = report.cost_log;
  j["seed"] = report.seed;
  std::vector<int> vertices;
  report.output_set.for_each([&](int u) { vertices.push_back(u + 1); });
  j["output_set"] = vertices;
  j["queries"] = report.ledger.queries().size();
  j["schedule"] = report.schedule.describe();
  return j.dump();
}

}  // namespace wamls
