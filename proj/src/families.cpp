#include "wamls/families.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <queue>
#include <sstream>
#include <tuple>

#include "wamls/bounds.hpp"
#include "wamls/errors.hpp"
#include "wamls/log_sum.hpp"

namespace wamls {

std::string to_hex(Subset s) {
  char buf[17];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), s.bits(), 16);
  (void)ec;
  return std::string(buf, end);
}

Subset subset_from_hex(const std::string& hex) {
  std::uint64_t bits = 0;
  auto [ptr, ec] = std::from_chars(hex.data(), hex.data() + hex.size(), bits, 16);
  if (ec != std::errc() || ptr != hex.data() + hex.size() || hex.empty()) {
    throw DomainError("invalid hex subset '" + hex + "'");
  }
  return Subset(bits);
}

namespace {

constexpr double kFloorSlack = 1e-9;

int floor_with_slack(double x) { return static_cast<int>(std::floor(x + kFloorSlack)); }

std::string shortest(double x) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  (void)ec;
  return std::string(buf, end);
}

bool within(double lhs, double rhs) {
  return lhs <= rhs + kWeightSlack * std::max(1.0, std::abs(rhs));
}

std::vector<Subset> k_subsets(int n, int k) {
  std::vector<Subset> out;
  for_each_k_subset(n, k, [&](Subset s) { out.push_back(s); });
  return out;
}

// Lazy greedy set cover of `targets` by `candidates`, both in increasing
// bitmask order. Ties go to the smaller candidate. Returns nullopt if some
// target cannot be covered.
template <typename Covers>
std::optional<std::vector<Subset>> greedy_cover(std::vector<Subset> uncovered,
                                                const std::vector<Subset>& candidates,
                                                Covers covers) {
  auto gain_of = [&](Subset t) {
    return static_cast<long>(std::count_if(uncovered.begin(), uncovered.end(),
                                           [&](Subset s) { return covers(t, s); }));
  };
  // (gain, -index): max-heap pops the largest gain, then the smallest index.
  std::priority_queue<std::pair<long, long>> heap;
  if (!candidates.empty()) {
    // All candidates of one cardinality start with the same gain.
    const long initial = gain_of(candidates.front());
    for (std::size_t i = 0; i < candidates.size(); ++i) heap.emplace(initial, -static_cast<long>(i));
  }

  std::vector<Subset> picked;
  while (!uncovered.empty()) {
    if (heap.empty()) return std::nullopt;
    auto [stale, neg_index] = heap.top();
    heap.pop();
    const Subset t = candidates[static_cast<std::size_t>(-neg_index)];
    const long fresh = gain_of(t);
    if (fresh == 0) {
      if (stale == 0) return std::nullopt;
      continue;
    }
    if (fresh < stale && !heap.empty() && heap.top() > std::make_pair(fresh, neg_index)) {
      heap.emplace(fresh, neg_index);
      continue;
    }
    picked.push_back(t);
    std::erase_if(uncovered, [&](Subset s) { return covers(t, s); });
  }
  return picked;
}

using CacheKey = std::tuple<int, int, double, double, double>;
std::mutex cache_mutex;
std::map<CacheKey, CoveringFamily> covering_cache;
std::map<CacheKey, ExtensionFamily> extension_cache;

void require_sets_in_universe(int n, Subset s) {
  if (!s.is_subset_of(Subset::full(n))) {
    throw DomainError("family member " + to_hex(s) + " outside universe of size " + std::to_string(n));
  }
}

std::vector<Weight> subset_weight_table(int n, std::span<const Weight> weights) {
  std::vector<Weight> table(std::size_t{1} << n, 0);
  for (std::uint64_t mask = 1; mask < table.size(); ++mask) {
    const int low = std::countr_zero(mask);
    table[mask] = table[mask & (mask - 1)] + weights[static_cast<std::size_t>(low)];
  }
  return table;
}

void check_weights(int n, std::span<const Weight> weights) {
  if (static_cast<int>(weights.size()) != n) {
    throw DomainError("expected " + std::to_string(n) + " weights, got " + std::to_string(weights.size()));
  }
  for (Weight w : weights) {
    if (w < 1) throw DomainError("weights must be >= 1");
  }
}

}  // namespace

CoveringFamily build_unweighted_covering(int n, double alpha, int cap) {
  if (n < 0) throw DomainError("universe size must be >= 0");
  if (!(alpha > 1.0) || !std::isfinite(alpha)) throw DomainError("covering needs alpha > 1");
  require_within_cap(n, cap, "build_unweighted_covering");

  const CacheKey key{0, n, alpha, 0.0, 0.0};
  {
    std::lock_guard lock(cache_mutex);
    if (auto it = covering_cache.find(key); it != covering_cache.end()) return it->second;
  }

  CoveringFamily family{n, alpha, {}};
  for (int s = 0; s <= n; ++s) {
    const int t = std::min(n, floor_with_slack(alpha * s));
    std::vector<Subset> targets = k_subsets(n, s);
    if (t == s) {
      family.sets.insert(family.sets.end(), targets.begin(), targets.end());
      continue;
    }
    auto picked = greedy_cover(std::move(targets), k_subsets(n, t),
                               [](Subset cand, Subset target) { return target.is_subset_of(cand); });
    // A superset of size t >= s always exists, so the greedy cannot stall.
    family.sets.insert(family.sets.end(), picked->begin(), picked->end());
  }
  normalize(family);

  std::lock_guard lock(cache_mutex);
  covering_cache.emplace(key, family);
  return family;
}

ExtensionFamily build_unweighted_extension(int n, double alpha, double c, double beta, int cap) {
  if (n < 0) throw DomainError("universe size must be >= 0");
  if (!(alpha >= 1.0) || !(c >= 1.0) || !std::isfinite(alpha) || !std::isfinite(c)) {
    throw DomainError("extension needs alpha, c >= 1");
  }
  if (!(beta > 1.0) || !std::isfinite(beta)) throw DomainError("extension needs beta > 1");
  require_within_cap(n, cap, "build_unweighted_extension");

  const CacheKey key{1, n, alpha, c, beta};
  {
    std::lock_guard lock(cache_mutex);
    if (auto it = extension_cache.find(key); it != extension_cache.end()) return it->second;
  }

  ExtensionFamily family{n, alpha, beta, {}};
  family.entries.push_back({Subset{}, 0});
  for (int s = 1; s <= n; ++s) {
    const double budget_weight = beta * s;
    if (budget_weight + kFloorSlack >= n) {
      family.entries.push_back({Subset::full(n), 0});
      continue;
    }
    const int t_max = std::min(n, floor_with_slack(budget_weight));
    auto budget_for = [&](int t) {
      return std::min({floor_with_slack((budget_weight - t) / alpha), s, n - t});
    };

    const double kappa = static_cast<double>(s) / n;
    const double tau = g_star(alpha, beta, c, kappa, 1e-9).tau_star;
    int t = std::clamp(static_cast<int>(std::lround(tau * n)), 0, t_max);
    while (t + budget_for(t) < s && t < t_max) ++t;
    const int ell = budget_for(t);

    std::optional<std::vector<Subset>> picked;
    if (t + ell >= s) {
      if (ell >= s) {
        picked = std::vector<Subset>{Subset::full(t)};
      } else {
        picked = greedy_cover(k_subsets(n, s), k_subsets(n, t), [ell](Subset cand, Subset target) {
          return (target - cand).size() <= ell;
        });
      }
    }
    if (picked) {
      for (Subset T : *picked) family.entries.push_back({T, ell});
    } else {
      // Always valid: every S witnesses itself with budget 0.
      for (Subset S : k_subsets(n, s)) family.entries.push_back({S, 0});
    }
  }
  normalize(family);

  std::lock_guard lock(cache_mutex);
  extension_cache.emplace(key, family);
  return family;
}

Verdict verify_covering(const CoveringFamily& family, std::span<const Weight> weights, int cap) {
  const int n = family.universe_size;
  require_within_cap(n, cap, "verify_covering");
  check_weights(n, weights);

  const std::size_t size = std::size_t{1} << n;
  constexpr Weight kNone = std::numeric_limits<Weight>::max();
  const std::vector<Weight> wtab = subset_weight_table(n, weights);

  // cheapest[S] = min weight of a family member containing S (superset-min
  // transform over the members).
  std::vector<Weight> cheapest(size, kNone);
  for (Subset t : family.sets) {
    require_sets_in_universe(n, t);
    cheapest[t.bits()] = wtab[t.bits()];
  }
  for (int bit = 0; bit < n; ++bit) {
    const std::uint64_t b = std::uint64_t{1} << bit;
    for (std::uint64_t mask = 0; mask < size; ++mask) {
      if ((mask & b) == 0) cheapest[mask] = std::min(cheapest[mask], cheapest[mask | b]);
    }
  }
  for (std::uint64_t mask = 0; mask < size; ++mask) {
    if (cheapest[mask] == kNone ||
        !within(static_cast<double>(cheapest[mask]), family.alpha * static_cast<double>(wtab[mask]))) {
      return {false, Subset(mask)};
    }
  }
  return {};
}

Verdict verify_extension(const ExtensionFamily& family, std::span<const Weight> weights, int cap) {
  const int n = family.universe_size;
  require_within_cap(n, cap, "verify_extension");
  check_weights(n, weights);

  // Only the largest budget per set matters for validity.
  std::map<std::uint64_t, int> best_budget;
  for (const ExtensionEntry& e : family.entries) {
    require_sets_in_universe(n, e.set);
    if (e.budget < 0) throw DomainError("negative budget in extension family");
    auto [it, inserted] = best_budget.emplace(e.set.bits(), e.budget);
    if (!inserted) it->second = std::max(it->second, e.budget);
  }

  const std::vector<Weight> wtab = subset_weight_table(n, weights);
  struct Candidate {
    std::uint64_t set;
    int budget;
    double weight;
  };
  std::vector<Candidate> candidates;
  candidates.reserve(best_budget.size());
  for (auto [set, budget] : best_budget) {
    candidates.push_back({set, budget, static_cast<double>(wtab[set])});
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) { return a.weight < b.weight; });

  const std::size_t size = std::size_t{1} << n;
  for (std::uint64_t mask = 0; mask < size; ++mask) {
    const double rhs = family.beta * static_cast<double>(wtab[mask]);
    bool ok = false;
    for (const Candidate& cand : candidates) {
      if (!within(cand.weight, rhs)) break;
      const std::uint64_t missing = mask & ~cand.set;
      if (std::popcount(missing) > cand.budget) continue;
      if (within(cand.weight + family.alpha * static_cast<double>(wtab[missing]), rhs)) {
        ok = true;
        break;
      }
    }
    if (!ok) return {false, Subset(mask)};
  }
  return {};
}

double family_cost(const ExtensionFamily& family, double c) {
  const double log_c = std::log(c);
  std::vector<double> terms;
  terms.reserve(family.entries.size());
  for (const ExtensionEntry& e : family.entries) terms.push_back(e.budget * log_c);
  return log_sum_exp(terms);
}

void normalize(CoveringFamily& family) {
  std::sort(family.sets.begin(), family.sets.end());
  family.sets.erase(std::unique(family.sets.begin(), family.sets.end()), family.sets.end());
}

void normalize(ExtensionFamily& family) {
  std::sort(family.entries.begin(), family.entries.end());
  family.entries.erase(std::unique(family.entries.begin(), family.entries.end()), family.entries.end());
}

void write_family(std::ostream& out, const CoveringFamily& family, const std::vector<std::string>& comments) {
  out << "family covering n=" << family.universe_size << " alpha=" << shortest(family.alpha) << '\n';
  for (const std::string& c : comments) out << "# " << c << '\n';
  for (Subset s : family.sets) out << to_hex(s) << '\n';
}

void write_family(std::ostream& out, const ExtensionFamily& family, const std::vector<std::string>& comments) {
  out << "family extension n=" << family.universe_size << " alpha=" << shortest(family.alpha)
      << " beta=" << shortest(family.beta) << '\n';
  for (const std::string& c : comments) out << "# " << c << '\n';
  for (const ExtensionEntry& e : family.entries) out << to_hex(e.set) << ' ' << e.budget << '\n';
}

AnyFamily read_family(std::istream& in) {
  std::string line;
  int line_no = 0;
  std::optional<AnyFamily> result;

  auto parse_double = [&](const std::string& text) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) throw ParseError(line_no, "bad number '" + text + "'");
    return v;
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    if (!result) {
      std::string word, kind;
      ls >> word >> kind;
      if (word != "family" || (kind != "covering" && kind != "extension")) {
        throw ParseError(line_no, "expected 'family covering|extension' header");
      }
      int n = -1;
      double alpha = -1.0, beta = -1.0;
      std::string tok;
      while (ls >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) throw ParseError(line_no, "bad header field '" + tok + "'");
        const std::string name = tok.substr(0, eq), value = tok.substr(eq + 1);
        if (name == "n") {
          n = static_cast<int>(parse_double(value));
        } else if (name == "alpha") {
          alpha = parse_double(value);
        } else if (name == "beta") {
          beta = parse_double(value);
        } else {
          throw ParseError(line_no, "unknown header field '" + name + "'");
        }
      }
      if (n < 0 || n > kMaxUniverse) throw ParseError(line_no, "missing or invalid n");
      if (alpha < 1.0) throw ParseError(line_no, "missing or invalid alpha");
      if (kind == "covering") {
        result = CoveringFamily{n, alpha, {}};
      } else {
        if (beta < 1.0) throw ParseError(line_no, "missing or invalid beta");
        result = ExtensionFamily{n, alpha, beta, {}};
      }
      continue;
    }
    std::string hex;
    ls >> hex;
    Subset s;
    try {
      s = subset_from_hex(hex);
    } catch (const DomainError& e) {
      throw ParseError(line_no, e.what());
    }
    if (auto* cov = std::get_if<CoveringFamily>(&*result)) {
      if (!s.is_subset_of(Subset::full(cov->universe_size))) throw ParseError(line_no, "set outside universe");
      cov->sets.push_back(s);
    } else {
      auto& ext = std::get<ExtensionFamily>(*result);
      int budget = -1;
      if (!(ls >> budget) || budget < 0) throw ParseError(line_no, "extension entry needs a budget >= 0");
      if (!s.is_subset_of(Subset::full(ext.universe_size))) throw ParseError(line_no, "set outside universe");
      ext.entries.push_back({s, budget});
    }
    std::string extra;
    if (ls >> extra) throw ParseError(line_no, "trailing text '" + extra + "'");
  }
  if (!result) throw ParseError(line_no, "empty family dump");
  return *result;
}

}  // namespace wamls
