#pragma once

#include <chrono>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "wamls/problems.hpp"
#include "wamls/subset.hpp"

namespace wamls {

// An alpha-extension oracle: extend(S, l) returns X with X u S a solution and
// w(X) <= alpha * min{ w(X') : |X'| <= l, X' u S a solution } whenever that
// minimum is finite. When no extension of size <= l exists the oracles return
// U \ S.
class ExtensionOracle {
 public:
  virtual ~ExtensionOracle() = default;

  virtual Subset extend(Subset s, int budget) const = 0;
  virtual double declared_alpha() const = 0;
  virtual double declared_c() const = 0;
  virtual std::string name() const = 0;
  virtual std::unique_ptr<ExtensionOracle> clone() const = 0;
};

// Enumerates every X subset of U \ S with |X| <= l (alpha = 1).
class ExactExtensionOracle final : public ExtensionOracle {
 public:
  explicit ExactExtensionOracle(Instance instance, double declared_c = 2.0, int cap = exact_cap());

  Subset extend(Subset s, int budget) const override;
  double declared_alpha() const override { return 1.0; }
  double declared_c() const override { return c_; }
  std::string name() const override { return "exact"; }
  std::unique_ptr<ExtensionOracle> clone() const override;

 private:
  Instance instance_;
  double c_;
};

// Bounded search tree for vertex cover on G - S: branch on the lowest
// uncovered edge, depth <= l. Exact (alpha = 1), c = 2.
class BranchingVertexCoverOracle final : public ExtensionOracle {
 public:
  explicit BranchingVertexCoverOracle(VertexCoverInstance instance);

  Subset extend(Subset s, int budget) const override;
  double declared_alpha() const override { return 1.0; }
  double declared_c() const override { return 2.0; }
  std::string name() const override { return "branching"; }
  std::unique_ptr<ExtensionOracle> clone() const override;

  // Search-tree nodes visited by the most recent extend call.
  std::uint64_t last_node_count() const { return nodes_; }

 private:
  VertexCoverInstance g_;
  mutable std::uint64_t nodes_ = 0;
};

// Local-ratio 2-approximation for weighted vertex cover of G - S. The
// budget is ignored (alpha = 2, c = 1).
class LocalRatioVertexCoverOracle final : public ExtensionOracle {
 public:
  explicit LocalRatioVertexCoverOracle(VertexCoverInstance instance);

  Subset extend(Subset s, int budget) const override;
  double declared_alpha() const override { return 2.0; }
  double declared_c() const override { return 1.0; }
  std::string name() const override { return "local-ratio"; }
  std::unique_ptr<ExtensionOracle> clone() const override;

 private:
  VertexCoverInstance g_;
};

// Local-ratio d-approximation for weighted d-hitting set (alpha = d, c = 1).
class LocalRatioHittingSetOracle final : public ExtensionOracle {
 public:
  explicit LocalRatioHittingSetOracle(HittingSetInstance instance);

  Subset extend(Subset s, int budget) const override;
  double declared_alpha() const override { return static_cast<double>(h_.d); }
  double declared_c() const override { return 1.0; }
  std::string name() const override { return "local-ratio"; }
  std::unique_ptr<ExtensionOracle> clone() const override;

 private:
  HittingSetInstance h_;
};

// d-way search tree on the lowest unhit set, depth <= l (alpha = 1, c = d).
class BranchingHittingSetOracle final : public ExtensionOracle {
 public:
  explicit BranchingHittingSetOracle(HittingSetInstance instance);

  Subset extend(Subset s, int budget) const override;
  double declared_alpha() const override { return 1.0; }
  double declared_c() const override { return static_cast<double>(h_.d); }
  std::string name() const override { return "branching"; }
  std::unique_ptr<ExtensionOracle> clone() const override;

 private:
  HittingSetInstance h_;
};

// Local-ratio 2-approximation for weighted feedback vertex set of G - S:
// semidisjoint-cycle reductions when such a cycle exists, degree-weighted
// reductions otherwise, followed by reverse deletion (alpha = 2, c = 1).
class LocalRatioFeedbackVertexSetOracle final : public ExtensionOracle {
 public:
  explicit LocalRatioFeedbackVertexSetOracle(FeedbackVertexSetInstance instance);

  Subset extend(Subset s, int budget) const override;
  double declared_alpha() const override { return 2.0; }
  double declared_c() const override { return 1.0; }
  std::string name() const override { return "local-ratio"; }
  std::unique_ptr<ExtensionOracle> clone() const override;

 private:
  FeedbackVertexSetInstance g_;
};

// Oracle names accepted per problem: "exact" everywhere, "branching" for
// vertex cover and hitting set, "local-ratio" for vertex cover, hitting set
// and feedback vertex set. Throws DomainError otherwise.
std::unique_ptr<ExtensionOracle> make_oracle(const std::string& name, const Instance& instance,
                                             double exact_c = 2.0);
std::vector<std::string> oracle_names(ProblemKind kind);

struct QueryRecord {
  int size_s = 0;
  int budget = 0;
  double cumulative_cost_log = 0.0;
};

// Per-run accounting of extension queries; cost_log = ln(sum c^l).
class QueryLedger {
 public:
  explicit QueryLedger(double c = 1.0);

  void record(int size_s, int budget);
  void merge(const QueryLedger& other);

  const std::vector<QueryRecord>& queries() const { return queries_; }
  double c() const { return c_; }
  double cost_log() const { return cost_log_; }
  std::chrono::nanoseconds wall_time() const { return wall_time_; }
  void add_wall_time(std::chrono::nanoseconds t) { wall_time_ += t; }

  // One JSON object per query: size_s, ell, cumulative_cost_log.
  void write_json_lines(std::ostream& out) const;

 private:
  double c_;
  double log_c_;
  double cost_log_;
  std::vector<QueryRecord> queries_;
  std::chrono::nanoseconds wall_time_{0};
};

// An oracle paired with its ledger; every extend call is charged c^l.
class ExtensionOracleHandle {
 public:
  ExtensionOracleHandle(std::unique_ptr<ExtensionOracle> oracle, double c);

  Subset extend(Subset s, int budget);
  double declared_alpha() const { return oracle_->declared_alpha(); }
  double declared_c() const { return ledger_.c(); }
  std::string name() const { return oracle_->name(); }
  const QueryLedger& ledger() const { return ledger_; }
  const ExtensionOracle& oracle() const { return *oracle_; }

  // Same oracle logic, fresh ledger.
  ExtensionOracleHandle clone() const;

 private:
  std::unique_ptr<ExtensionOracle> oracle_;
  QueryLedger ledger_;
};

ExtensionOracleHandle wrap_with_ledger(std::unique_ptr<ExtensionOracle> oracle, double c);
// Uses the oracle's declared c.
ExtensionOracleHandle wrap_with_ledger(std::unique_ptr<ExtensionOracle> oracle);

}  // namespace wamls
