#pragma once

// Deliberately naive reference implementations used as test oracles. None of
// them shares code paths with the library beyond is_solution.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "wamls/families.hpp"
#include "wamls/problems.hpp"

namespace ref {

using wamls::Subset;
using wamls::Weight;
using wamls::Weights;

inline long double entropy(long double x) {
  if (x == 0.0L || x == 1.0L) return 0.0L;
  return -x * std::log(x) - (1.0L - x) * std::log(1.0L - x);
}

inline Weight weight(std::uint64_t mask, const Weights& w) {
  Weight total = 0;
  for (std::size_t u = 0; u < w.size(); ++u) {
    if ((mask >> u) & 1U) total += w[u];
  }
  return total;
}

inline bool is_sub(std::uint64_t a, std::uint64_t b) { return (a & ~b) == 0; }

// First S (numeric order) with no covering member, if any.
inline std::optional<std::uint64_t> covering_violation(const wamls::CoveringFamily& f, const Weights& w) {
  const std::uint64_t full = std::uint64_t{1} << w.size();
  for (std::uint64_t s = 0; s < full; ++s) {
    bool ok = false;
    for (Subset t : f.sets) {
      if (is_sub(s, t.bits()) && weight(t.bits(), w) <= f.alpha * weight(s, w) * (1 + 1e-9)) {
        ok = true;
        break;
      }
    }
    if (!ok) return s;
  }
  return std::nullopt;
}

inline std::optional<std::uint64_t> extension_violation(const wamls::ExtensionFamily& f, const Weights& w) {
  const std::uint64_t full = std::uint64_t{1} << w.size();
  for (std::uint64_t s = 0; s < full; ++s) {
    bool ok = false;
    for (const wamls::ExtensionEntry& e : f.entries) {
      const std::uint64_t rest = s & ~e.set.bits();
      if (__builtin_popcountll(rest) > e.budget) continue;
      const double lhs = static_cast<double>(weight(e.set.bits(), w)) + f.alpha * static_cast<double>(weight(rest, w));
      if (lhs <= f.beta * static_cast<double>(weight(s, w)) * (1 + 1e-9)) {
        ok = true;
        break;
      }
    }
    if (!ok) return s;
  }
  return std::nullopt;
}

// Minimum weight of X with |X| <= budget and S u X a solution; nullopt if none.
inline std::optional<Weight> restricted_min(const wamls::Instance& inst, Subset s, int budget) {
  const Weights& w = wamls::weights_of(inst);
  const std::uint64_t full = std::uint64_t{1} << w.size();
  std::optional<Weight> best;
  for (std::uint64_t x = 0; x < full; ++x) {
    if ((x & s.bits()) != 0 || __builtin_popcountll(x) > budget) continue;
    if (!wamls::is_solution(inst, s | Subset(x))) continue;
    const Weight wx = weight(x, w);
    if (!best || wx < *best) best = wx;
  }
  return best;
}

inline Weight optimum(const wamls::Instance& inst) {
  return *restricted_min(inst, Subset{}, static_cast<int>(wamls::universe_size(inst)));
}

}  // namespace ref
