#include "wamls/problems.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include "wamls/errors.hpp"

namespace wamls {

namespace {

struct UnionFind {
  std::array<int, kMaxUniverse> parent{};

  explicit UnionFind(int n) { std::iota(parent.begin(), parent.begin() + n, 0); }

  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      auto& p = parent[static_cast<std::size_t>(x)];
      p = parent[static_cast<std::size_t>(p)];
      x = p;
    }
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[static_cast<std::size_t>(a)] = b;
    return true;
  }
};

void check_common(int n, const Weights& weights) {
  if (n < 0 || n > kMaxUniverse) {
    throw DomainError("universe size must be in [0, " + std::to_string(kMaxUniverse) + "]");
  }
  if (static_cast<int>(weights.size()) != n) throw DomainError("need exactly one weight per vertex");
  for (Weight w : weights) {
    if (w < 1) throw DomainError("weights must be >= 1");
  }
}

void normalize_edges(int n, std::vector<Edge>& edges, bool allow_loops, bool keep_parallel) {
  for (auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n) throw DomainError("edge endpoint out of range");
    if (u == v && !allow_loops) throw DomainError("self-loops are not allowed here");
    if (u > v) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  if (!keep_parallel) edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

}  // namespace

ProblemKind kind_of(const Instance& instance) { return static_cast<ProblemKind>(instance.index()); }

std::string problem_tag(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::vertex_cover:
      return "wvc";
    case ProblemKind::hitting_set:
      return "whs";
    case ProblemKind::feedback_vertex_set:
      return "wfvs";
    case ProblemKind::partial_vertex_cover:
      return "wpvc";
  }
  return "unknown";
}

ProblemKind problem_kind_from_tag(const std::string& tag) {
  if (tag == "wvc") return ProblemKind::vertex_cover;
  if (tag == "whs") return ProblemKind::hitting_set;
  if (tag == "wfvs") return ProblemKind::feedback_vertex_set;
  if (tag == "wpvc") return ProblemKind::partial_vertex_cover;
  throw DomainError("unknown problem '" + tag + "'");
}

int universe_size(const Instance& instance) {
  return std::visit([](const auto& x) { return x.n; }, instance);
}

const Weights& weights_of(const Instance& instance) {
  return std::visit([](const auto& x) -> const Weights& { return x.weights; }, instance);
}

void normalize(Instance& instance) {
  std::visit(
      [](auto& x) {
        using T = std::decay_t<decltype(x)>;
        check_common(x.n, x.weights);
        if constexpr (std::is_same_v<T, HittingSetInstance>) {
          if (x.d < 1) throw DomainError("hitting set arity d must be >= 1");
          for (Subset s : x.sets) {
            if (s.empty()) throw DomainError("hitting set contains an empty set");
            if (s.size() > x.d) throw DomainError("set of size " + std::to_string(s.size()) + " exceeds d");
            if (!s.is_subset_of(Subset::full(x.n))) throw DomainError("set element out of range");
          }
          std::sort(x.sets.begin(), x.sets.end());
          x.sets.erase(std::unique(x.sets.begin(), x.sets.end()), x.sets.end());
        } else if constexpr (std::is_same_v<T, FeedbackVertexSetInstance>) {
          normalize_edges(x.n, x.edges, true, true);
        } else {
          normalize_edges(x.n, x.edges, false, false);
          if constexpr (std::is_same_v<T, PartialVertexCoverInstance>) {
            if (x.threshold < 0) throw DomainError("partial vertex cover threshold must be >= 0");
            // Otherwise U itself would not be a solution.
            if (x.threshold > static_cast<std::int64_t>(x.edges.size())) {
              throw DomainError("partial vertex cover threshold exceeds the number of edges");
            }
          }
        }
      },
      instance);
}

bool is_solution(const VertexCoverInstance& g, Subset s) {
  return std::all_of(g.edges.begin(), g.edges.end(),
                     [&](const Edge& e) { return s.contains(e.first) || s.contains(e.second); });
}

bool is_solution(const HittingSetInstance& h, Subset s) {
  return std::all_of(h.sets.begin(), h.sets.end(), [&](Subset f) { return !(f & s).empty(); });
}

bool is_forest(int n, const std::vector<Edge>& edges, Subset alive) {
  UnionFind uf(n);
  for (const auto& [u, v] : edges) {
    if (!alive.contains(u) || !alive.contains(v)) continue;
    if (!uf.unite(u, v)) return false;  // also catches self-loops
  }
  return true;
}

bool is_solution(const FeedbackVertexSetInstance& g, Subset s) {
  return is_forest(g.n, g.edges, Subset::full(g.n) - s);
}

bool is_solution(const PartialVertexCoverInstance& g, Subset s) {
  const auto covered = std::count_if(g.edges.begin(), g.edges.end(),
                                     [&](const Edge& e) { return s.contains(e.first) || s.contains(e.second); });
  return covered >= g.threshold;
}

bool is_solution(const Instance& instance, Subset s) {
  return std::visit([s](const auto& x) { return is_solution(x, s); }, instance);
}

ExactSolution exact_opt(const Instance& instance, int cap) {
  const int n = universe_size(instance);
  require_within_cap(n, cap, "exact_opt");
  const Weights& w = weights_of(instance);

  std::optional<ExactSolution> best;
  const std::uint64_t end = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < end; ++mask) {
    const Subset s(mask);
    const Weight ws = weight_of(s, w);
    if (best && !better_solution(s, ws, best->set, best->weight)) continue;
    if (is_solution(instance, s)) best = ExactSolution{s, ws};
  }
  if (!best) throw DomainError("set system has no solution (threshold larger than the edge count?)");
  return *best;
}

Instance parse_instance(std::istream& in) {
  std::string line;
  int line_no = 0;
  std::optional<Instance> inst;
  int n = 0;
  long expected_items = 0, seen_weights = 0, seen_items = 0;
  std::vector<bool> weight_seen;

  auto fail = [&](const std::string& what) { throw ParseError(line_no, what); };
  auto read_int = [&](std::istringstream& ls, const char* what) {
    long long v = 0;
    if (!(ls >> v)) fail(std::string("expected ") + what);
    return v;
  };
  auto read_vertex = [&](std::istringstream& ls) {
    const long long v = read_int(ls, "vertex");
    if (v < 1 || v > n) fail("vertex " + std::to_string(v) + " out of range 1.." + std::to_string(n));
    return static_cast<int>(v - 1);
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;

    if (tag == "p") {
      if (inst) fail("duplicate problem line");
      std::string kind;
      ls >> kind;
      ProblemKind pk{};
      try {
        pk = problem_kind_from_tag(kind);
      } catch (const DomainError& e) {
        fail(e.what());
      }
      const long long nn = read_int(ls, "n");
      if (nn < 0 || nn > kMaxUniverse) fail("n must be in [0, " + std::to_string(kMaxUniverse) + "]");
      n = static_cast<int>(nn);
      expected_items = static_cast<long>(read_int(ls, "m"));
      if (expected_items < 0) fail("m must be >= 0");
      const Weights w(static_cast<std::size_t>(n), 0);
      weight_seen.assign(static_cast<std::size_t>(n), false);
      switch (pk) {
        case ProblemKind::vertex_cover:
          inst = VertexCoverInstance{n, w, {}};
          break;
        case ProblemKind::hitting_set: {
          const long long d = read_int(ls, "d");
          if (d < 1) fail("d must be >= 1");
          inst = HittingSetInstance{n, w, static_cast<int>(d), {}};
          break;
        }
        case ProblemKind::feedback_vertex_set:
          inst = FeedbackVertexSetInstance{n, w, {}};
          break;
        case ProblemKind::partial_vertex_cover: {
          const long long t = read_int(ls, "t");
          if (t < 0) fail("t must be >= 0");
          inst = PartialVertexCoverInstance{n, w, {}, t};
          break;
        }
      }
    } else if (!inst) {
      fail("expected problem line 'p ...' first");
    } else if (tag == "w") {
      const int v = read_vertex(ls);
      const long long weight = read_int(ls, "weight");
      if (weight < 1) fail("weights must be >= 1");
      if (weight_seen[static_cast<std::size_t>(v)]) fail("duplicate weight for vertex " + std::to_string(v + 1));
      weight_seen[static_cast<std::size_t>(v)] = true;
      std::visit([&](auto& x) { x.weights[static_cast<std::size_t>(v)] = weight; }, *inst);
      ++seen_weights;
    } else if (tag == "e") {
      if (std::holds_alternative<HittingSetInstance>(*inst)) fail("'e' lines are for graph problems");
      const int u = read_vertex(ls);
      const int v = read_vertex(ls);
      if (u == v && !std::holds_alternative<FeedbackVertexSetInstance>(*inst)) fail("self-loop not allowed");
      std::visit(
          [&](auto& x) {
            if constexpr (!std::is_same_v<std::decay_t<decltype(x)>, HittingSetInstance>) x.edges.emplace_back(u, v);
          },
          *inst);
      ++seen_items;
    } else if (tag == "s") {
      auto* hs = std::get_if<HittingSetInstance>(&*inst);
      if (hs == nullptr) fail("'s' lines are for hitting set");
      const long long k = read_int(ls, "set size");
      if (k < 1) fail("sets must be non-empty");
      if (k > hs->d) fail("set size " + std::to_string(k) + " exceeds d = " + std::to_string(hs->d));
      Subset s;
      for (long long i = 0; i < k; ++i) s.insert(read_vertex(ls));
      hs->sets.push_back(s);
      ++seen_items;
    } else {
      fail("unknown line type '" + tag + "'");
    }
    std::string extra;
    if (ls >> extra) fail("trailing text '" + extra + "'");
  }
  if (!inst) throw ParseError(line_no, "missing problem line");
  if (seen_weights != n) throw ParseError(line_no, "expected " + std::to_string(n) + " weight lines");
  if (seen_items != expected_items) {
    throw ParseError(line_no, "expected " + std::to_string(expected_items) + " edge/set lines, got " +
                                  std::to_string(seen_items));
  }
  try {
    normalize(*inst);
  } catch (const DomainError& e) {
    throw ParseError(line_no, e.what());
  }
  return *inst;
}

Instance parse_instance_text(const std::string& text) {
  std::istringstream in(text);
  return parse_instance(in);
}

void write_instance(std::ostream& out, const Instance& instance) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        out << "p " << problem_tag(kind_of(instance)) << ' ' << x.n << ' ';
        if constexpr (std::is_same_v<T, HittingSetInstance>) {
          out << x.sets.size() << ' ' << x.d << '\n';
        } else if constexpr (std::is_same_v<T, PartialVertexCoverInstance>) {
          out << x.edges.size() << ' ' << x.threshold << '\n';
        } else {
          out << x.edges.size() << '\n';
        }
        for (int v = 0; v < x.n; ++v) out << "w " << v + 1 << ' ' << x.weights[static_cast<std::size_t>(v)] << '\n';
        if constexpr (std::is_same_v<T, HittingSetInstance>) {
          for (Subset s : x.sets) {
            out << "s " << s.size();
            s.for_each([&](int u) { out << ' ' << u + 1; });
            out << '\n';
          }
        } else {
          for (const auto& [u, v] : x.edges) out << "e " << u + 1 << ' ' << v + 1 << '\n';
        }
      },
      instance);
}

std::string instance_text(const Instance& instance) {
  std::ostringstream os;
  write_instance(os, instance);
  return os.str();
}

Instance random_instance(const RandomInstanceSpec& spec) {
  if (spec.n < 0 || spec.n > kMaxUniverse) throw DomainError("random_instance: n out of range");
  if (!(spec.density >= 0.0 && spec.density <= 1.0)) throw DomainError("random_instance: density outside [0, 1]");
  if (spec.min_weight < 1 || spec.max_weight < spec.min_weight) {
    throw DomainError("random_instance: weight range must satisfy 1 <= min <= max");
  }
  std::mt19937_64 rng(spec.seed);
  std::uniform_int_distribution<Weight> weight_dist(spec.min_weight, spec.max_weight);
  Weights weights(static_cast<std::size_t>(spec.n));
  for (Weight& w : weights) w = weight_dist(rng);

  auto random_edges = [&] {
    std::bernoulli_distribution coin(spec.density);
    std::vector<Edge> edges;
    for (int u = 0; u < spec.n; ++u) {
      for (int v = u + 1; v < spec.n; ++v) {
        if (coin(rng)) edges.emplace_back(u, v);
      }
    }
    return edges;
  };

  Instance inst;
  switch (spec.kind) {
    case ProblemKind::vertex_cover:
      inst = VertexCoverInstance{spec.n, weights, random_edges()};
      break;
    case ProblemKind::feedback_vertex_set:
      inst = FeedbackVertexSetInstance{spec.n, weights, random_edges()};
      break;
    case ProblemKind::partial_vertex_cover:
    {
      std::vector<Edge> edges = random_edges();
      const auto t = std::min<std::int64_t>(spec.threshold, static_cast<std::int64_t>(edges.size()));
      inst = PartialVertexCoverInstance{spec.n, weights, std::move(edges), t};
    }
      break;
    case ProblemKind::hitting_set: {
      if (spec.d < 1) throw DomainError("random_instance: d must be >= 1");
      const auto m = static_cast<long>(std::lround(spec.density * spec.n * (spec.n - 1) / 2.0));
      const int max_size = std::min(spec.d, spec.n);
      const int min_size = std::min(2, max_size);
      std::uniform_int_distribution<int> size_dist(min_size, std::max(min_size, max_size));
      std::vector<int> order(static_cast<std::size_t>(spec.n));
      std::vector<Subset> sets;
      for (long i = 0; i < m && spec.n > 0; ++i) {
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        Subset s;
        const int k = size_dist(rng);
        for (int j = 0; j < k; ++j) s.insert(order[static_cast<std::size_t>(j)]);
        sets.push_back(s);
      }
      inst = HittingSetInstance{spec.n, weights, spec.d, sets};
      break;
    }
  }
  normalize(inst);
  return inst;
}

}  // namespace wamls
