#pragma once

#include <compare>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "wamls/subset.hpp"

namespace wamls {

// Every S subset of U has a member T with S subset of T and w(T) <= alpha * w(S).
struct CoveringFamily {
  int universe_size = 0;
  double alpha = 1.0;
  std::vector<Subset> sets;
};

struct ExtensionEntry {
  Subset set;
  int budget = 0;

  friend bool operator==(const ExtensionEntry&, const ExtensionEntry&) = default;
  friend auto operator<=>(const ExtensionEntry&, const ExtensionEntry&) = default;
};

// Every S has an entry (T, l) with |S \ T| <= l and
// w(T) + alpha * w(S \ T) <= beta * w(S).
struct ExtensionFamily {
  int universe_size = 0;
  double alpha = 1.0;
  double beta = 1.0;
  std::vector<ExtensionEntry> entries;
};

// Layered greedy construction: for each cardinality s, floor(alpha*s)-sets
// are picked greedily until every s-subset is contained in one of them.
CoveringFamily build_unweighted_covering(int n, double alpha, int cap = family_cap());

// Layered greedy construction with per-layer (|T|, l) chosen from the
// minimizing tau of the bound exponent at kappa = s/n.
ExtensionFamily build_unweighted_extension(int n, double alpha, double c, double beta,
                                           int cap = family_cap());

struct Verdict {
  bool pass = true;
  // Least violating S (bitmask order) when !pass.
  std::optional<Subset> witness;
};

// Both inequalities are checked with relative slack kWeightSlack so that
// exactly tight entries are not rejected by rounding.
inline constexpr double kWeightSlack = 1e-9;

Verdict verify_covering(const CoveringFamily& family, std::span<const Weight> weights,
                        int cap = family_cap());
Verdict verify_extension(const ExtensionFamily& family, std::span<const Weight> weights,
                         int cap = family_cap());

// ln(sum over entries of c^l), kLogZero for an empty family.
double family_cost(const ExtensionFamily& family, double c);

// Sorts and removes duplicates (same set, or same (set, budget) pair).
void normalize(CoveringFamily& family);
void normalize(ExtensionFamily& family);

// Line-oriented dump:
//   family covering n=<n> alpha=<a>
//   family extension n=<n> alpha=<a> beta=<b>
// followed by one hex bitmask per line (plus " <l>" for extension entries).
// Lines starting with '#' are comments.
using AnyFamily = std::variant<CoveringFamily, ExtensionFamily>;

void write_family(std::ostream& out, const CoveringFamily& family,
                  const std::vector<std::string>& comments = {});
void write_family(std::ostream& out, const ExtensionFamily& family,
                  const std::vector<std::string>& comments = {});
AnyFamily read_family(std::istream& in);

}  // namespace wamls
