#include "wamls/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>

#include <json.hpp>

#include "wamls/errors.hpp"
#include "wamls/log_sum.hpp"

namespace wamls {

namespace {

void require_budget(int budget) {
  if (budget < 0) throw DomainError("extension budget must be >= 0");
}

// Incumbent under the canonical ordering.
struct Best {
  std::optional<Subset> set;
  Weight weight = 0;

  void offer(Subset x, Weight w) {
    if (!set || better_solution(x, w, *set, weight)) {
      set = x;
      weight = w;
    }
  }
};

// Drops members of x (latest first in `order`) while s u x stays a solution.
template <typename IsSolution>
Subset reverse_delete(Subset s, Subset x, const std::vector<int>& order, IsSolution&& ok) {
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (!x.contains(*it)) continue;
    Subset trial = x;
    trial.erase(*it);
    if (ok(s | trial)) x = trial;
  }
  return x;
}

}  // namespace

// ---------------------------------------------------------------- exact

ExactExtensionOracle::ExactExtensionOracle(Instance instance, double declared_c, int cap)
    : instance_(std::move(instance)), c_(declared_c) {
  if (!(declared_c >= 1.0)) throw DomainError("declared c must be >= 1");
  require_within_cap(universe_size(instance_), cap, "exact_extension_oracle");
}

Subset ExactExtensionOracle::extend(Subset s, int budget) const {
  require_budget(budget);
  const int n = universe_size(instance_);
  const Weights& w = weights_of(instance_);
  const std::vector<int> free = (Subset::full(n) - s).elements();
  const int m = static_cast<int>(free.size());

  Best best;
  for (int k = 0; k <= std::min(budget, m); ++k) {
    for_each_k_subset(m, k, [&](Subset local) {
      Subset x;
      local.for_each([&](int i) { x.insert(free[static_cast<std::size_t>(i)]); });
      const Weight wx = weight_of(x, w);
      if (best.set && !better_solution(x, wx, *best.set, best.weight)) return;
      if (is_solution(instance_, s | x)) best.offer(x, wx);
    });
  }
  return best.set ? *best.set : Subset::full(n) - s;
}

std::unique_ptr<ExtensionOracle> ExactExtensionOracle::clone() const {
  return std::make_unique<ExactExtensionOracle>(*this);
}

// ---------------------------------------------------------------- vertex cover

BranchingVertexCoverOracle::BranchingVertexCoverOracle(VertexCoverInstance instance) : g_(std::move(instance)) {}

Subset BranchingVertexCoverOracle::extend(Subset s, int budget) const {
  require_budget(budget);
  nodes_ = 0;
  Best best;
  const auto recurse = [&](const auto& self, Subset x, Weight wx, int depth) -> void {
    ++nodes_;
    if (best.set && wx > best.weight) return;
    const Subset taken = s | x;
    for (const auto& [u, v] : g_.edges) {
      if (taken.contains(u) || taken.contains(v)) continue;
      if (depth == budget) return;
      self(self, Subset(x).insert(u), wx + g_.weights[static_cast<std::size_t>(u)], depth + 1);
      self(self, Subset(x).insert(v), wx + g_.weights[static_cast<std::size_t>(v)], depth + 1);
      return;
    }
    best.offer(x, wx);
  };
  recurse(recurse, Subset{}, 0, 0);
  return best.set ? *best.set : Subset::full(g_.n) - s;
}

std::unique_ptr<ExtensionOracle> BranchingVertexCoverOracle::clone() const {
  return std::make_unique<BranchingVertexCoverOracle>(g_);
}

LocalRatioVertexCoverOracle::LocalRatioVertexCoverOracle(VertexCoverInstance instance) : g_(std::move(instance)) {}

Subset LocalRatioVertexCoverOracle::extend(Subset s, int budget) const {
  require_budget(budget);
  Weights r = g_.weights;
  Subset x;
  std::vector<int> order;
  for (const auto& [u, v] : g_.edges) {
    if (s.contains(u) || s.contains(v) || x.contains(u) || x.contains(v)) continue;
    const Weight eps = std::min(r[static_cast<std::size_t>(u)], r[static_cast<std::size_t>(v)]);
    for (int z : {u, v}) {
      r[static_cast<std::size_t>(z)] -= eps;
      if (r[static_cast<std::size_t>(z)] == 0) {
        x.insert(z);
        order.push_back(z);
      }
    }
  }
  return reverse_delete(s, x, order, [&](Subset t) { return is_solution(g_, t); });
}

std::unique_ptr<ExtensionOracle> LocalRatioVertexCoverOracle::clone() const {
  return std::make_unique<LocalRatioVertexCoverOracle>(g_);
}

// ---------------------------------------------------------------- hitting set

namespace {

void check_arity(const HittingSetInstance& h) {
  if (h.d < 1) throw DomainError("hitting set arity d must be >= 1");
  for (Subset f : h.sets) {
    if (f.empty() || f.size() > h.d) throw DomainError("hyperedge size outside [1, d]");
  }
}

}  // namespace

LocalRatioHittingSetOracle::LocalRatioHittingSetOracle(HittingSetInstance instance) : h_(std::move(instance)) {
  check_arity(h_);
}

Subset LocalRatioHittingSetOracle::extend(Subset s, int budget) const {
  require_budget(budget);
  Weights r = h_.weights;
  Subset x;
  std::vector<int> order;
  for (Subset f : h_.sets) {
    if (!(f & (s | x)).empty()) continue;
    Weight eps = std::numeric_limits<Weight>::max();
    f.for_each([&](int u) { eps = std::min(eps, r[static_cast<std::size_t>(u)]); });
    f.for_each([&](int u) {
      r[static_cast<std::size_t>(u)] -= eps;
      if (r[static_cast<std::size_t>(u)] == 0) {
        x.insert(u);
        order.push_back(u);
      }
    });
  }
  return reverse_delete(s, x, order, [&](Subset t) { return is_solution(h_, t); });
}

std::unique_ptr<ExtensionOracle> LocalRatioHittingSetOracle::clone() const {
  return std::make_unique<LocalRatioHittingSetOracle>(h_);
}

BranchingHittingSetOracle::BranchingHittingSetOracle(HittingSetInstance instance) : h_(std::move(instance)) {
  check_arity(h_);
}

Subset BranchingHittingSetOracle::extend(Subset s, int budget) const {
  require_budget(budget);
  Best best;
  const auto recurse = [&](const auto& self, Subset x, Weight wx, int depth) -> void {
    if (best.set && wx > best.weight) return;
    const Subset taken = s | x;
    for (Subset f : h_.sets) {
      if (!(f & taken).empty()) continue;
      if (depth == budget) return;
      f.for_each([&](int u) { self(self, Subset(x).insert(u), wx + h_.weights[static_cast<std::size_t>(u)], depth + 1); });
      return;
    }
    best.offer(x, wx);
  };
  recurse(recurse, Subset{}, 0, 0);
  return best.set ? *best.set : Subset::full(h_.n) - s;
}

std::unique_ptr<ExtensionOracle> BranchingHittingSetOracle::clone() const {
  return std::make_unique<BranchingHittingSetOracle>(h_);
}

// ---------------------------------------------------------------- feedback vertex set

namespace {

// Residual multigraph on the vertices still alive.
class ResidualGraph {
 public:
  ResidualGraph(const FeedbackVertexSetInstance& g, Subset alive) : g_(g), alive_(alive) {}

  Subset alive() const { return alive_; }
  void remove(int v) { alive_.erase(v); }

  std::vector<int> degrees() const {
    std::vector<int> deg(static_cast<std::size_t>(g_.n), 0);
    for (const auto& [u, v] : g_.edges) {
      if (!alive_.contains(u) || !alive_.contains(v)) continue;
      ++deg[static_cast<std::size_t>(u)];
      ++deg[static_cast<std::size_t>(v)];
    }
    return deg;
  }

  // Strips vertices of degree <= 1 until none remain.
  void prune_leaves() {
    bool changed = true;
    while (changed) {
      changed = false;
      const std::vector<int> deg = degrees();
      alive_.for_each([&](int v) {
        if (deg[static_cast<std::size_t>(v)] <= 1) {
          alive_.erase(v);
          changed = true;
        }
      });
    }
  }

  // A cycle in which at most one vertex has degree > 2, if any.
  std::optional<Subset> semidisjoint_cycle() const {
    const std::vector<int> deg = degrees();
    std::vector<std::vector<std::pair<int, int>>> adj(static_cast<std::size_t>(g_.n));  // (edge id, other end)
    for (std::size_t e = 0; e < g_.edges.size(); ++e) {
      const auto [u, v] = g_.edges[e];
      if (!alive_.contains(u) || !alive_.contains(v)) continue;
      if (u == v) return Subset::singleton(u);
      adj[static_cast<std::size_t>(u)].push_back({static_cast<int>(e), v});
      adj[static_cast<std::size_t>(v)].push_back({static_cast<int>(e), u});
    }
    Subset seen;
    std::optional<Subset> found;
    alive_.for_each([&](int start) {
      if (found || seen.contains(start) || deg[static_cast<std::size_t>(start)] != 2) return;
      Subset path = Subset::singleton(start);
      int ends[2] = {-1, -1};
      for (int side = 0; side < 2 && !found; ++side) {
        int cur = adj[static_cast<std::size_t>(start)][static_cast<std::size_t>(side)].second;
        int via = adj[static_cast<std::size_t>(start)][static_cast<std::size_t>(side)].first;
        while (true) {
          if (cur == start) {
            found = path;  // a component that is a pure cycle
            break;
          }
          if (deg[static_cast<std::size_t>(cur)] != 2) {
            ends[side] = cur;
            break;
          }
          path.insert(cur);
          const auto& nb = adj[static_cast<std::size_t>(cur)];
          const auto& next = nb[0].first == via ? nb[1] : nb[0];
          via = next.first;
          cur = next.second;
        }
      }
      seen |= path;
      if (!found && ends[0] >= 0 && ends[0] == ends[1]) found = Subset(path).insert(ends[0]);
    });
    return found;
  }

 private:
  const FeedbackVertexSetInstance& g_;
  Subset alive_;
};

}  // namespace

LocalRatioFeedbackVertexSetOracle::LocalRatioFeedbackVertexSetOracle(FeedbackVertexSetInstance instance)
    : g_(std::move(instance)) {}

Subset LocalRatioFeedbackVertexSetOracle::extend(Subset s, int budget) const {
  require_budget(budget);
  std::vector<double> r(g_.weights.begin(), g_.weights.end());
  ResidualGraph graph(g_, Subset::full(g_.n) - s);
  Subset x;
  std::vector<int> order;
  const auto take = [&](int v) {
    x.insert(v);
    order.push_back(v);
    graph.remove(v);
  };

  while (true) {
    graph.prune_leaves();
    if (graph.alive().empty()) break;
    if (const std::optional<Subset> cycle = graph.semidisjoint_cycle()) {
      int arg = -1;
      cycle->for_each([&](int v) {
        if (arg < 0 || r[static_cast<std::size_t>(v)] < r[static_cast<std::size_t>(arg)]) arg = v;
      });
      const double eps = r[static_cast<std::size_t>(arg)];
      cycle->for_each([&](int v) { r[static_cast<std::size_t>(v)] = std::max(0.0, r[static_cast<std::size_t>(v)] - eps); });
      r[static_cast<std::size_t>(arg)] = 0.0;
    } else {
      const std::vector<int> deg = graph.degrees();
      int arg = -1;
      double eps = 0.0;
      graph.alive().for_each([&](int v) {
        const double ratio = r[static_cast<std::size_t>(v)] / (deg[static_cast<std::size_t>(v)] - 1);
        if (arg < 0 || ratio < eps) {
          arg = v;
          eps = ratio;
        }
      });
      graph.alive().for_each([&](int v) {
        double& rv = r[static_cast<std::size_t>(v)];
        rv = std::max(0.0, rv - eps * (deg[static_cast<std::size_t>(v)] - 1));
      });
      r[static_cast<std::size_t>(arg)] = 0.0;
    }
    graph.alive().for_each([&](int v) {
      if (r[static_cast<std::size_t>(v)] == 0.0) take(v);
    });
  }
  return reverse_delete(s, x, order, [&](Subset t) { return is_solution(g_, t); });
}

std::unique_ptr<ExtensionOracle> LocalRatioFeedbackVertexSetOracle::clone() const {
  return std::make_unique<LocalRatioFeedbackVertexSetOracle>(g_);
}

// ---------------------------------------------------------------- factory

std::vector<std::string> oracle_names(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::vertex_cover:
    case ProblemKind::hitting_set:
      return {"exact", "branching", "local-ratio"};
    case ProblemKind::feedback_vertex_set:
      return {"exact", "local-ratio"};
    case ProblemKind::partial_vertex_cover:
      return {"exact"};
  }
  return {};
}

std::unique_ptr<ExtensionOracle> make_oracle(const std::string& name, const Instance& instance, double exact_c) {
  const ProblemKind kind = kind_of(instance);
  const std::vector<std::string> names = oracle_names(kind);
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    throw DomainError("oracle '" + name + "' is not available for " + problem_tag(kind));
  }
  if (name == "exact") return std::make_unique<ExactExtensionOracle>(instance, exact_c);
  if (name == "branching") {
    if (kind == ProblemKind::vertex_cover) {
      return std::make_unique<BranchingVertexCoverOracle>(std::get<VertexCoverInstance>(instance));
    }
    return std::make_unique<BranchingHittingSetOracle>(std::get<HittingSetInstance>(instance));
  }
  switch (kind) {
    case ProblemKind::vertex_cover:
      return std::make_unique<LocalRatioVertexCoverOracle>(std::get<VertexCoverInstance>(instance));
    case ProblemKind::hitting_set:
      return std::make_unique<LocalRatioHittingSetOracle>(std::get<HittingSetInstance>(instance));
    default:
      return std::make_unique<LocalRatioFeedbackVertexSetOracle>(std::get<FeedbackVertexSetInstance>(instance));
  }
}

// ---------------------------------------------------------------- ledger

QueryLedger::QueryLedger(double c) : c_(c), log_c_(std::log(c)), cost_log_(kLogZero) {
  if (!(c >= 1.0) || !std::isfinite(c)) throw DomainError("cost base c must be >= 1");
}

void QueryLedger::record(int size_s, int budget) {
  cost_log_ = log_add_exp(cost_log_, budget * log_c_);
  queries_.push_back({size_s, budget, cost_log_});
}

void QueryLedger::merge(const QueryLedger& other) {
  for (const QueryRecord& q : other.queries_) record(q.size_s, q.budget);
  wall_time_ += other.wall_time_;
}

void QueryLedger::write_json_lines(std::ostream& out) const {
  for (const QueryRecord& q : queries_) {
    nlohmann::ordered_json j;
    j["size_s"] = q.size_s;
    j["ell"] = q.budget;
    j["cumulative_cost_log"] = q.cumulative_cost_log;
    out << j.dump() << '\n';
  }
}

ExtensionOracleHandle::ExtensionOracleHandle(std::unique_ptr<ExtensionOracle> oracle, double c)
    : oracle_(std::move(oracle)), ledger_(c) {
  if (!oracle_) throw DomainError("null oracle");
}

Subset ExtensionOracleHandle::extend(Subset s, int budget) {
  const auto start = std::chrono::steady_clock::now();
  const Subset x = oracle_->extend(s, budget);
  ledger_.add_wall_time(std::chrono::steady_clock::now() - start);
  ledger_.record(s.size(), budget);
  return x;
}

ExtensionOracleHandle ExtensionOracleHandle::clone() const { return {oracle_->clone(), ledger_.c()}; }

ExtensionOracleHandle wrap_with_ledger(std::unique_ptr<ExtensionOracle> oracle, double c) {
  return {std::move(oracle), c};
}

ExtensionOracleHandle wrap_with_ledger(std::unique_ptr<ExtensionOracle> oracle) {
  if (!oracle) throw DomainError("null oracle");
  const double c = oracle->declared_c();
  return {std::move(oracle), c};
}

}  // namespace wamls
