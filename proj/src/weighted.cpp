#include "wamls/weighted.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "wamls/bounds.hpp"
#include "wamls/errors.hpp"

namespace wamls {

namespace {

void validate_weights(std::span<const Weight> weights) {
  for (Weight w : weights) {
    if (w < 1) throw DomainError("weights must be >= 1");
  }
}

// Re-indexes a class-local family into global element indices.
std::vector<ExtensionEntry> to_global(const std::vector<int>& members, const std::vector<ExtensionEntry>& local) {
  std::vector<ExtensionEntry> out;
  out.reserve(local.size());
  for (const ExtensionEntry& e : local) {
    Subset global;
    e.set.for_each([&](int u) { global.insert(members[static_cast<std::size_t>(u)]); });
    out.push_back({global, e.budget});
  }
  return out;
}

template <typename BuildLocal>
ClassFamilies build_class_families(const WeightClassPartition& partition, ConstructionSchedule& schedule,
                                   BuildLocal build_local) {
  ClassFamilies families;
  for (const auto& [index, members] : partition.classes) {
    const std::vector<int> elems = members.elements();
    families[index] = to_global(elems, build_local(static_cast<int>(elems.size())));
    schedule.class_family_sizes[index] = families[index].size();
  }
  return families;
}

}  // namespace

Subset WeightClassPartition::prefix(int k) const {
  Subset out;
  for (const auto& [index, members] : classes) {
    if (static_cast<long>(index) < static_cast<long>(k) - window) out |= members;
  }
  return out;
}

std::vector<int> WeightClassPartition::window_indices(int k) const {
  std::vector<int> out;
  for (int index : index_set) {
    if (static_cast<long>(index) >= static_cast<long>(k) - window && index <= k) out.push_back(index);
  }
  return out;
}

WeightClassPartition partition_by_weight(std::span<const Weight> weights, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("partition_by_weight needs 0 < delta < 1");
  validate_weights(weights);
  if (weights.size() > static_cast<std::size_t>(kMaxUniverse)) {
    throw ResourceError("universe larger than " + std::to_string(kMaxUniverse) + " elements");
  }

  WeightClassPartition p;
  p.n = static_cast<int>(weights.size());
  p.delta = delta;
  p.gamma = 1.0 + delta / 2.0;
  if (p.n > 0) {
    const double target = 2.0 * p.n / delta;
    p.window = static_cast<long>(std::ceil((2.0 / delta) * std::log2(target)));
    // (1 + delta/2)^{2/delta} >= 2 makes this hold already; keep it exact
    // under rounding.
    while (static_cast<double>(p.window) * std::log(p.gamma) < std::log(target)) ++p.window;
  }

  const double log_gamma = std::log(p.gamma);
  for (std::size_t u = 0; u < weights.size(); ++u) {
    const double w = static_cast<double>(weights[u]);
    int i = static_cast<int>(std::floor(std::log(w) / log_gamma));
    while (std::pow(p.gamma, i + 1) <= w) ++i;
    while (i > 0 && std::pow(p.gamma, i) > w) --i;
    p.class_of.push_back(i);
    p.classes[i].insert(static_cast<int>(u));
  }
  for (const auto& [index, members] : p.classes) p.index_set.push_back(index);
  return p;
}

void for_each_block_entry(const WeightClassPartition& partition, const ClassFamilies& families, int k,
                          const std::function<void(const ExtensionEntry&)>& f) {
  const Subset base = partition.prefix(k);
  std::vector<const std::vector<ExtensionEntry>*> factors;
  for (int index : partition.window_indices(k)) {
    auto it = families.find(index);
    if (it == families.end() || it->second.empty()) return;
    factors.push_back(&it->second);
  }

  std::vector<std::size_t> digit(factors.size(), 0);
  while (true) {
    ExtensionEntry entry{base, 0};
    for (std::size_t j = 0; j < factors.size(); ++j) {
      const ExtensionEntry& part = (*factors[j])[digit[j]];
      entry.set |= part.set;
      entry.budget += part.budget;
    }
    f(entry);

    std::size_t j = 0;
    for (; j < factors.size(); ++j) {
      if (++digit[j] < factors[j]->size()) break;
      digit[j] = 0;
    }
    if (j == factors.size()) return;
  }
}

std::vector<ExtensionEntry> combine_blocks(const WeightClassPartition& partition, const ClassFamilies& families,
                                           int k) {
  std::vector<ExtensionEntry> block;
  for_each_block_entry(partition, families, k, [&](const ExtensionEntry& e) { block.push_back(e); });
  return block;
}

std::string to_string(CoveringMode mode) {
  switch (mode) {
    case CoveringMode::schedule:
      return "schedule";
    case CoveringMode::fixed:
      return "fixed";
    case CoveringMode::exhaustive:
      return "exhaustive";
  }
  return "unknown";
}

CoveringMode covering_mode_from_string(const std::string& name) {
  if (name == "schedule") return CoveringMode::schedule;
  if (name == "fixed") return CoveringMode::fixed;
  if (name == "exhaustive") return CoveringMode::exhaustive;
  throw DomainError("unknown covering mode '" + name + "'");
}

std::string ConstructionSchedule::describe() const {
  std::ostringstream os;
  os.precision(10);
  os << "schedule mode=" << mode << " delta=" << delta << " inner_target=" << inner_target << " d=" << window
     << " gamma=" << gamma << " class_family_sizes=";
  bool first = true;
  for (const auto& [index, size] : class_family_sizes) {
    os << (first ? "" : ",") << index << ':' << size;
    first = false;
  }
  return os.str();
}

WeightedCoveringReport build_weighted_covering(std::span<const Weight> weights, double alpha, CoveringMode mode,
                                               const ConstructionOptions& options) {
  const bool alpha_ok = mode == CoveringMode::exhaustive ? alpha >= 1.0 : alpha > 1.0;
  if (!alpha_ok || !std::isfinite(alpha)) throw DomainError("covering needs alpha > 1 (alpha >= 1 when exhaustive)");
  validate_weights(weights);
  const int n = static_cast<int>(weights.size());
  require_within_cap(n, options.cap, "build_weighted_covering");

  WeightedCoveringReport report;
  report.family = {n, alpha, {}};
  report.schedule.mode = to_string(mode);

  if (n == 0) {
    report.family.sets.push_back(Subset{});
  } else if (mode == CoveringMode::exhaustive) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) report.family.sets.emplace_back(mask);
  } else {
    double inner = (alpha + 1.0) / 2.0;
    double delta = (alpha - 1.0) / (alpha + 1.0);
    if (mode == CoveringMode::schedule) {
      const double scheduled = n >= 2 ? alpha - 1.0 / std::log2(static_cast<double>(n)) : 0.0;
      const double scheduled_delta = alpha / scheduled - 1.0;
      if (scheduled > 1.0 && scheduled_delta > 0.0 && scheduled_delta < 1.0) {
        inner = scheduled;
        delta = scheduled_delta;
      } else {
        report.schedule.mode = "fixed";
      }
    }
    report.schedule.delta = delta;
    report.schedule.inner_target = inner;

    const WeightClassPartition partition = partition_by_weight(weights, delta);
    report.schedule.window = partition.window;
    report.schedule.gamma = partition.gamma;

    const ClassFamilies families = build_class_families(partition, report.schedule, [&](int size) {
      std::vector<ExtensionEntry> local;
      for (Subset s : build_unweighted_covering(size, inner, options.cap).sets) local.push_back({s, 0});
      return local;
    });
    for (int k : partition.index_set) {
      for_each_block_entry(partition, families, k,
                           [&](const ExtensionEntry& e) { report.family.sets.push_back(e.set); });
    }
  }
  normalize(report.family);

  if (options.self_check) {
    const Verdict v = verify_covering(report.family, weights, options.cap);
    if (!v.pass) {
      throw std::logic_error("weighted covering family misses S = " + to_hex(*v.witness));
    }
    report.verified = true;
  }
  return report;
}

double select_inner_target(double alpha, double c, double beta, double eps) {
  if (!(beta > 1.0)) throw DomainError("inner target needs beta > 1");
  if (!(eps > 0.0)) throw DomainError("eps must be > 0");
  const double precision = std::min(1e-7, eps / 10.0);
  const double target = amls_bound({alpha, c, beta, precision}).value + eps / 2.0;
  // Probes approach beta from the midpoint (1 + beta)/2; the first accepted
  // one leaves the widest rounding slack delta = beta/zeta' - 1.
  for (int j = 1; j <= 40; ++j) {
    const double zeta = beta - (beta - 1.0) * std::ldexp(1.0, -j);
    if (!(zeta < beta)) break;
    if (amls_bound({alpha, c, zeta, precision}).value <= target) return zeta;
  }
  return (1.0 + beta) / 2.0;
}

WeightedExtensionReport build_weighted_extension(std::span<const Weight> weights, double alpha, double c,
                                                 double beta, double eps, const ConstructionOptions& options) {
  if (!(alpha >= 1.0) || !(c >= 1.0) || !std::isfinite(alpha) || !std::isfinite(c)) {
    throw DomainError("extension needs alpha, c >= 1");
  }
  if (!(beta > 1.0) || !std::isfinite(beta)) throw DomainError("extension needs beta > 1");
  if (!(eps > 0.0)) throw DomainError("eps must be > 0");
  validate_weights(weights);
  const int n = static_cast<int>(weights.size());
  require_within_cap(n, options.cap, "build_weighted_extension");

  WeightedExtensionReport report;
  report.family = {n, alpha, beta, {}};
  report.schedule.mode = "extension";

  if (n == 0) {
    report.family.entries.push_back({Subset{}, 0});
  } else {
    const double zeta = select_inner_target(alpha, c, beta, eps);
    const double delta = beta / zeta - 1.0;
    report.schedule.inner_target = zeta;
    report.schedule.delta = delta;

    const WeightClassPartition partition = partition_by_weight(weights, delta);
    report.schedule.window = partition.window;
    report.schedule.gamma = partition.gamma;

    const ClassFamilies families = build_class_families(partition, report.schedule, [&](int size) {
      return build_unweighted_extension(size, alpha, c, zeta, options.cap).entries;
    });
    for (int k : partition.index_set) {
      for_each_block_entry(partition, families, k,
                           [&](const ExtensionEntry& e) { report.family.entries.push_back(e); });
    }
  }
  normalize(report.family);
  report.cost_log = family_cost(report.family, c);

  if (options.self_check) {
    const Verdict v = verify_extension(report.family, weights, options.cap);
    if (!v.pass) {
      throw std::logic_error("weighted extension family misses S = " + to_hex(*v.witness));
    }
    report.verified = true;
  }
  return report;
}

}  // namespace wamls
