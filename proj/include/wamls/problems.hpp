#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "wamls/subset.hpp"

namespace wamls {

using Edge = std::pair<int, int>;

// Find a minimum-weight S such that G - S has no edges.
struct VertexCoverInstance {
  int n = 0;
  Weights weights;
  std::vector<Edge> edges;  // u < v, sorted, no duplicates

  friend bool operator==(const VertexCoverInstance&, const VertexCoverInstance&) = default;
};

// Find a minimum-weight S meeting every set.
struct HittingSetInstance {
  int n = 0;
  Weights weights;
  int d = 2;
  std::vector<Subset> sets;  // non-empty, |F| <= d, sorted, no duplicates

  friend bool operator==(const HittingSetInstance&, const HittingSetInstance&) = default;
};

// Find a minimum-weight S such that G - S is acyclic. Multigraph: parallel
// edges and self-loops are kept and count as cycles.
struct FeedbackVertexSetInstance {
  int n = 0;
  Weights weights;
  std::vector<Edge> edges;  // u <= v, sorted, multiplicities kept

  friend bool operator==(const FeedbackVertexSetInstance&, const FeedbackVertexSetInstance&) = default;
};

// S is a solution iff at least `threshold` edges have an endpoint in S.
// Membership only; no dedicated extension oracle.
struct PartialVertexCoverInstance {
  int n = 0;
  Weights weights;
  std::vector<Edge> edges;  // u < v, sorted, no duplicates
  std::int64_t threshold = 0;

  friend bool operator==(const PartialVertexCoverInstance&, const PartialVertexCoverInstance&) = default;
};

using Instance =
    std::variant<VertexCoverInstance, HittingSetInstance, FeedbackVertexSetInstance, PartialVertexCoverInstance>;

enum class ProblemKind { vertex_cover, hitting_set, feedback_vertex_set, partial_vertex_cover };

ProblemKind kind_of(const Instance& instance);
// "wvc", "whs", "wfvs", "wpvc" (the instance file tags).
std::string problem_tag(ProblemKind kind);
ProblemKind problem_kind_from_tag(const std::string& tag);

int universe_size(const Instance& instance);
const Weights& weights_of(const Instance& instance);

// Validates ranges and weights (throws DomainError) and canonicalizes edge
// and set lists.
void normalize(Instance& instance);

bool is_solution(const VertexCoverInstance& g, Subset s);
bool is_solution(const HittingSetInstance& h, Subset s);
bool is_solution(const FeedbackVertexSetInstance& g, Subset s);
bool is_solution(const PartialVertexCoverInstance& g, Subset s);
bool is_solution(const Instance& instance, Subset s);

// Acyclicity of the multigraph on `alive` vertices.
bool is_forest(int n, const std::vector<Edge>& edges, Subset alive);

struct ExactSolution {
  Subset set;
  Weight weight = 0;
};

// Exhaustive scan of all 2^n subsets with the canonical tie-break.
ExactSolution exact_opt(const Instance& instance, int cap = exact_cap());

// Counts membership queries; wraps an instance as a yes/no oracle.
class MembershipOracle {
 public:
  explicit MembershipOracle(const Instance& instance) : instance_(&instance) {}

  bool operator()(Subset s) {
    ++queries_;
    return is_solution(*instance_, s);
  }
  std::uint64_t queries() const { return queries_; }

 private:
  const Instance* instance_;
  std::uint64_t queries_ = 0;
};

// Line-oriented instance format (1-based vertices, '#' comments):
//   p wvc <n> <m> | p whs <n> <m> <d> | p wfvs <n> <m> | p wpvc <n> <m> <t>
//   w <vertex> <weight>          exactly n lines
//   e <u> <v> | s <k> <e1..ek>   exactly m lines
Instance parse_instance(std::istream& in);
Instance parse_instance_text(const std::string& text);
void write_instance(std::ostream& out, const Instance& instance);
std::string instance_text(const Instance& instance);

struct RandomInstanceSpec {
  ProblemKind kind = ProblemKind::vertex_cover;
  int n = 10;
  // Edge probability for graphs; for hitting set the number of sets is
  // round(density * n * (n - 1) / 2).
  double density = 0.3;
  Weight min_weight = 1;
  Weight max_weight = 100;
  int d = 3;                        // hitting set arity
  std::int64_t threshold = 1;       // partial vertex cover, clamped to the edge count
  std::uint64_t seed = 0;
};

Instance random_instance(const RandomInstanceSpec& spec);

}  // namespace wamls
