#include <doctest.h>

#include <cmath>

#include "reference.hpp"
#include "wamls/driver.hpp"
#include "wamls/errors.hpp"

using namespace wamls;

namespace {

Instance vc(int n, std::uint64_t seed, double density = 0.3) {
  return random_instance({.kind = ProblemKind::vertex_cover, .n = n, .density = density, .seed = seed});
}

// Always returns the empty set: violates the oracle contract on any instance
// with an edge.
class LazyOracle final : public ExtensionOracle {
 public:
  Subset extend(Subset, int) const override { return {}; }
  double declared_alpha() const override { return 1.0; }
  double declared_c() const override { return 1.0; }
  std::string name() const override { return "lazy"; }
  std::unique_ptr<ExtensionOracle> clone() const override { return std::make_unique<LazyOracle>(); }
};

}  // namespace

TEST_SUITE("driver") {

TEST_CASE("membership driver") {
  const Instance edgeless = VertexCoverInstance{5, {1, 2, 3, 4, 5}, {}};
  const RunReport r0 = approximate_membership(edgeless, 2.0, CoveringMode::schedule);
  CHECK(r0.output_set.empty());
  CHECK(r0.output_weight == 0);

  const Instance g = vc(10, 4);
  const RunReport exh = approximate_membership(g, 1.0, CoveringMode::exhaustive);
  CHECK(exh.output_weight == ref::optimum(g));
  CHECK(exh.family_size == 1024);

  for (double alpha : {1.5, 2.0, 3.0}) {
    const RunReport r = approximate_membership(g, alpha, CoveringMode::schedule);
    CHECK(is_solution(g, r.output_set));
    CHECK(static_cast<double>(r.output_weight) <= alpha * static_cast<double>(ref::optimum(g)) + 1e-9);
    CHECK(r.ledger.queries().size() == r.family_size);
    CHECK(r.model == "membership");
    CHECK(r.beta == alpha);
  }
}

TEST_CASE("extension driver") {
  const Instance g = vc(12, 21);
  const Weight opt = ref::optimum(g);

  ExtensionOracleHandle exact = wrap_with_ledger(make_oracle("exact", g));
  const RunReport a = approximate_extension(g, exact, 1.5, 0.05);
  CHECK(is_solution(g, a.output_set));
  CHECK(static_cast<double>(a.output_weight) <= 1.5 * static_cast<double>(opt));

  ExtensionOracleHandle lr = wrap_with_ledger(make_oracle("local-ratio", g));
  const RunReport b = approximate_extension(g, lr, 1.9, 0.05);
  CHECK(is_solution(g, b.output_set));
  CHECK(static_cast<double>(b.output_weight) <= 1.9 * static_cast<double>(opt));
  CHECK(b.alpha == 2.0);
  CHECK(b.c == 1.0);

  // Ledger completeness.
  CHECK(b.ledger.queries().size() == b.family_size);
  CHECK(b.cost_log == doctest::Approx(b.ledger.cost_log()));

  const Instance done = VertexCoverInstance{3, {1, 1, 1}, {}};
  ExtensionOracleHandle h = wrap_with_ledger(make_oracle("branching", done));
  CHECK(approximate_extension(done, h, 1.5, 0.1).output_weight == 0);
}

TEST_CASE("extension driver across problems") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    for (ProblemKind kind : {ProblemKind::hitting_set, ProblemKind::feedback_vertex_set}) {
      const Instance inst = random_instance({.kind = kind, .n = 8, .density = 0.3, .d = 3, .seed = seed});
      const Weight opt = ref::optimum(inst);
      for (const std::string& name : oracle_names(kind)) {
        for (double beta : {1.2, 1.5, 1.9}) {
          ExtensionOracleHandle h = wrap_with_ledger(make_oracle(name, inst));
          const RunReport r = approximate_extension(inst, h, beta, 0.05);
          CHECK(is_solution(inst, r.output_set));
          CHECK(static_cast<double>(r.output_weight) <= beta * static_cast<double>(opt) + 1e-9);
        }
      }
    }
  }
}

TEST_CASE("contract violations abort") {
  const Instance g = VertexCoverInstance{2, {1, 1}, {{0, 1}}};
  ExtensionOracleHandle h(std::make_unique<LazyOracle>(), 1.0);
  CHECK_THROWS_AS(approximate_extension(g, h, 1.5, 0.1), OracleContractError);
}

TEST_CASE("verify_run") {
  const Instance g = vc(10, 2);
  ExtensionOracleHandle h = wrap_with_ledger(make_oracle("local-ratio", g));
  RunReport r = approximate_extension(g, h, 1.9, 0.05);
  const RunVerdict ok = verify_run(g, r, 1.9);
  CHECK(ok.pass);
  CHECK(ok.message == "ok");
  REQUIRE(ok.opt_weight);
  CHECK(*ok.opt_weight == ref::optimum(g));
  attach_verdict(r, ok);
  CHECK(r.achieved_ratio == ok.achieved_ratio);

  RunReport not_solution = r;
  not_solution.output_set = Subset{};
  not_solution.output_weight = 0;
  const RunVerdict bad = verify_run(g, not_solution, 1.9);
  CHECK_FALSE(bad.pass);
  CHECK(bad.message == "not a solution");

  RunReport heavy = r;
  heavy.output_set = Subset::full(10);
  heavy.output_weight = ref::weight(Subset::full(10).bits(), weights_of(g));
  const RunVerdict over = verify_run(g, heavy, 1.01);
  CHECK_FALSE(over.pass);
  CHECK(over.message == "ratio exceeded");

  // Above the cap only membership is checked.
  const RunVerdict capped = verify_run(g, heavy, 1.01, 5);
  CHECK(capped.pass);
  CHECK_FALSE(capped.opt_weight.has_value());
}

TEST_CASE("reports are deterministic") {
  const Instance g = vc(11, 13, 0.4);
  ExtensionOracleHandle h1 = wrap_with_ledger(make_oracle("branching", g));
  ExtensionOracleHandle h2 = wrap_with_ledger(make_oracle("branching", g));
  const RunReport a = approximate_extension(g, h1, 1.5, 0.05, {.seed = 9});
  const RunReport b = approximate_extension(g, h2, 1.5, 0.05, {.seed = 9});
  CHECK(report_json(a) == report_json(b));
  const std::string json = report_json(a);
  for (const char* key : {"\"problem\"", "\"n\"", "\"alpha\"", "\"c\"", "\"beta\"", "\"eps\"", "\"output_weight\"",
                          "\"opt_weight\"", "\"ratio\"", "\"family_size\"", "\"cost_log\"", "\"seed\":9"}) {
    CHECK(json.find(key) != std::string::npos);
  }
}

}  // TEST_SUITE
