#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "wamls/oracles.hpp"
#include "wamls/problems.hpp"
#include "wamls/weighted.hpp"

namespace wamls {

struct RunReport {
  std::string problem;  // instance tag
  std::string model;    // "membership" or "extension"
  std::string oracle;   // extension oracle name; "membership" otherwise
  int n = 0;
  double alpha = 1.0;
  double c = 1.0;
  double beta = 1.0;  // target factor: beta for extension runs, alpha for membership runs
  double eps = 0.0;
  std::uint64_t seed = 0;

  Subset output_set;
  Weight output_weight = 0;
  std::optional<Weight> opt_weight;
  std::optional<double> achieved_ratio;
  std::size_t family_size = 0;
  double cost_log = 0.0;
  QueryLedger ledger;
  ConstructionSchedule schedule;
};

struct DriverOptions {
  int cap = family_cap();
  // Exhaustively verify the constructed family before querying it.
  bool self_check = true;
  std::uint64_t seed = 0;  // echoed into the report
};

// Queries membership of every member of a weighted alpha-covering family and
// returns the lightest member that is a solution (weight <= alpha * OPT).
RunReport approximate_membership(const Instance& instance, double alpha, CoveringMode mode,
                                 const DriverOptions& options = {});

// Queries oracle(T, l) for every entry of a weighted (alpha, beta)-extension
// family and returns the lightest T u X (weight <= beta * OPT). Throws
// OracleContractError if the oracle returns a set that is not a completion.
RunReport approximate_extension(const Instance& instance, ExtensionOracleHandle& oracle, double beta, double eps,
                                const DriverOptions& options = {});

struct RunVerdict {
  bool pass = true;
  std::string message;  // "ok", "not a solution", "ratio exceeded"
  std::optional<Weight> opt_weight;
  std::optional<double> achieved_ratio;
};

// Membership of the output plus, when n <= cap, output_weight <= factor * OPT.
RunVerdict verify_run(const Instance& instance, const RunReport& report, double target_factor,
                      int cap = exact_cap());

// Copies opt_weight and achieved_ratio from a verdict into the report.
void attach_verdict(RunReport& report, const RunVerdict& verdict);

// Single JSON object (no wall-clock fields, so equal runs give equal bytes).
std::string report_json(const RunReport& report);

}  // namespace wamls
