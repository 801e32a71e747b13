#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace wamls {

// Published three-decimal bound values; `c` is absent for the brute rows.
struct ReferenceRow {
  std::string table;
  double alpha = 1.0;
  std::optional<double> c;
  std::vector<double> betas;
  std::vector<double> values;
};

const std::vector<ReferenceRow>& reference_rows();

struct HarnessOptions {
  int max_n = 12;        // end-to-end VC size; hitting set / FVS use min(max_n, 10)
  int trials = 200;      // VC end-to-end instances; the other problems use trials / 2
  std::uint64_t seed = 1;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

CriterionResult check_bound_reproduction(const HarnessOptions& options);    // 1
CriterionResult check_closed_form_anchors(const HarnessOptions& options);   // 2
CriterionResult check_dominance(const HarnessOptions& options);             // 3
CriterionResult check_shape(const HarnessOptions& options);                 // 4
CriterionResult check_family_validity(const HarnessOptions& options);       // 5
CriterionResult check_end_to_end(const HarnessOptions& options);            // 6
CriterionResult check_oracle_contracts(const HarnessOptions& options);      // 7
CriterionResult check_exhaustive_membership(const HarnessOptions& options); // 8
CriterionResult check_accounting(const HarnessOptions& options);            // 9
CriterionResult check_determinism(const HarnessOptions& options);           // 10

// "bounds" (1-4), "families" (5), "oracles" (7), "end-to-end" (6, 8-10), "all".
std::vector<std::string> suite_names();
std::vector<CriterionResult> run_suite(const std::string& suite, const HarnessOptions& options,
                                       std::ostream* progress = nullptr);

// "PASS  6 end-to-end ratio soundness: ... (12.3 s)"
std::string format_result(const CriterionResult& result);

}  // namespace wamls
