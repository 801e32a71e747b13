#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wamls/families.hpp"
#include "wamls/subset.hpp"

namespace wamls {

// Geometric rounding of the weights: element u lies in class i iff
// gamma^i <= w(u) < gamma^{i+1}, with gamma = 1 + delta/2.
struct WeightClassPartition {
  int n = 0;
  double delta = 0.0;
  double gamma = 1.0;
  // Window width ceil((2/delta) * log2(2n/delta)); gamma^window >= 2n/delta.
  long window = 0;
  std::map<int, Subset> classes;  // only non-empty classes
  std::vector<int> index_set;     // sorted keys of `classes`
  std::vector<int> class_of;      // class index per element

  // Union of the classes with index < k - window (the cheap prefix W_k).
  Subset prefix(int k) const;
  // Non-empty class indices in [k - window, k].
  std::vector<int> window_indices(int k) const;
};

WeightClassPartition partition_by_weight(std::span<const Weight> weights, double delta);

// Per-class unweighted families, already mapped back to global element
// indices. Covering families use budget 0 throughout.
using ClassFamilies = std::map<int, std::vector<ExtensionEntry>>;

// Calls f(entry) for each (W_k u E_1 u ... u E_r, l_1 + ... + l_r) over the
// product of the class families in the window of k, in odometer order.
void for_each_block_entry(const WeightClassPartition& partition, const ClassFamilies& families, int k,
                          const std::function<void(const ExtensionEntry&)>& f);

// Materialized block Q_k.
std::vector<ExtensionEntry> combine_blocks(const WeightClassPartition& partition,
                                           const ClassFamilies& families, int k);

// How the inner target for the covering construction is chosen.
//  schedule   : beta = alpha - 1/log2(n), delta = alpha/beta - 1 (falls back
//               to fixed when that is infeasible for small n)
//  fixed      : delta = (alpha-1)/(alpha+1), beta = (alpha+1)/2
//  exhaustive : every subset of U (exact search, degenerate family)
enum class CoveringMode { schedule, fixed, exhaustive };

std::string to_string(CoveringMode mode);
CoveringMode covering_mode_from_string(const std::string& name);

struct ConstructionSchedule {
  std::string mode;
  double delta = 0.0;
  double inner_target = 0.0;  // beta for covering, zeta' for extension
  long window = 0;
  double gamma = 1.0;
  std::map<int, std::size_t> class_family_sizes;

  // "# schedule ..." comment body for family dumps.
  std::string describe() const;
};

struct WeightedCoveringReport {
  CoveringFamily family;
  ConstructionSchedule schedule;
  bool verified = false;
};

struct WeightedExtensionReport {
  ExtensionFamily family;
  ConstructionSchedule schedule;
  double cost_log = 0.0;  // ln of the c-cost
  bool verified = false;
};

struct ConstructionOptions {
  int cap = family_cap();
  // Run the exhaustive verifier on the result and throw std::logic_error if
  // it fails.
  bool self_check = true;
};

// alpha-covering family of (U, w) for alpha > 1 (alpha >= 1 in exhaustive mode).
WeightedCoveringReport build_weighted_covering(std::span<const Weight> weights, double alpha,
                                               CoveringMode mode, const ConstructionOptions& options = {});

// (alpha, beta)-extension family of (U, w) whose cost targets amls(alpha, c, beta) + eps.
WeightedExtensionReport build_weighted_extension(std::span<const Weight> weights, double alpha, double c,
                                                 double beta, double eps,
                                                 const ConstructionOptions& options = {});

// Inner target zeta' in (max(1, beta/2), beta) with
// amls(alpha, c, zeta') <= amls(alpha, c, beta) + eps/2.
double select_inner_target(double alpha, double c, double beta, double eps);

}  // namespace wamls
