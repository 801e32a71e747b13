#include <doctest.h>

#include <random>
#include <sstream>

#include "reference.hpp"
#include "wamls/errors.hpp"
#include "wamls/problems.hpp"

using namespace wamls;

namespace {

VertexCoverInstance triangle_vc() { return {3, {1, 1, 1}, {{0, 1}, {0, 2}, {1, 2}}}; }
FeedbackVertexSetInstance triangle_fvs() { return {3, {1, 1, 1}, {{0, 1}, {0, 2}, {1, 2}}}; }

}  // namespace

TEST_SUITE("problems") {

TEST_CASE("membership") {
  const Instance vc = triangle_vc();
  const Instance fvs = triangle_fvs();
  const Instance hs = HittingSetInstance{3, {1, 1, 1}, 2, {Subset(0b011), Subset(0b100)}};
  for (const Instance* inst : {&vc, &fvs, &hs}) CHECK(is_solution(*inst, Subset::full(3)));
  CHECK_FALSE(is_solution(vc, Subset::singleton(0)));
  CHECK(is_solution(fvs, Subset::singleton(0)));
  CHECK(is_solution(hs, Subset(0b110)));
  CHECK_FALSE(is_solution(hs, Subset(0b011)));

  // Parallel edges and self-loops are cycles.
  const FeedbackVertexSetInstance multi{3, {1, 1, 1}, {{0, 1}, {0, 1}, {2, 2}}};
  CHECK_FALSE(is_solution(multi, Subset{}));
  CHECK_FALSE(is_solution(multi, Subset::singleton(0) | Subset::singleton(1)));
  CHECK(is_solution(multi, Subset::singleton(0) | Subset::singleton(2)));

  const PartialVertexCoverInstance pvc{4, {1, 1, 1, 1}, {{0, 1}, {1, 2}, {2, 3}}, 2};
  CHECK_FALSE(is_solution(pvc, Subset{}));
  CHECK_FALSE(is_solution(pvc, Subset::singleton(0)));
  CHECK(is_solution(pvc, Subset::singleton(1)));
}

TEST_CASE("membership is monotone") {
  std::mt19937_64 rng(9);
  for (ProblemKind kind : {ProblemKind::vertex_cover, ProblemKind::hitting_set, ProblemKind::feedback_vertex_set,
                           ProblemKind::partial_vertex_cover}) {
    const Instance inst = random_instance({.kind = kind, .n = 8, .density = 0.4, .threshold = 6, .seed = 4});
    for (std::uint64_t s = 0; s < 256; ++s) {
      if (!is_solution(inst, Subset(s))) continue;
      for (int u = 0; u < 8; ++u) CHECK(is_solution(inst, Subset(s) | Subset::singleton(u)));
    }
    (void)rng;
  }
}

TEST_CASE("exact optimum") {
  CHECK(exact_opt(VertexCoverInstance{4, {1, 1, 1, 1}, {}}).weight == 0);
  CHECK(exact_opt(VertexCoverInstance{4, {1, 1, 1, 1}, {}}).set.empty());
  const ExactSolution p3 = exact_opt(VertexCoverInstance{3, {3, 1, 3}, {{0, 1}, {1, 2}}});
  CHECK(p3.set == Subset::singleton(1));
  CHECK(p3.weight == 1);
  const ExactSolution tri = exact_opt(triangle_fvs());
  CHECK(tri.weight == 1);
  CHECK(tri.set == Subset::singleton(0));  // tie-break by mask
  CHECK_THROWS_AS(exact_opt(VertexCoverInstance{30, Weights(30, 1), {}}, 20), ResourceError);
}

TEST_CASE("exact optimum agrees with a naive scan") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    for (ProblemKind kind : {ProblemKind::vertex_cover, ProblemKind::hitting_set, ProblemKind::feedback_vertex_set,
                             ProblemKind::partial_vertex_cover}) {
      const Instance inst =
          random_instance({.kind = kind, .n = 9, .density = 0.3, .max_weight = 20, .threshold = 5, .seed = seed});
      CHECK(exact_opt(inst).weight == ref::optimum(inst));
    }
  }
}

TEST_CASE("regression fixture n=12 density 0.3 seed 7") {
  const Instance a = random_instance({.kind = ProblemKind::vertex_cover, .n = 12, .density = 0.3, .seed = 7});
  const Instance b = random_instance({.kind = ProblemKind::vertex_cover, .n = 12, .density = 0.3, .seed = 7});
  CHECK(a == b);
  const ExactSolution x = exact_opt(a);
  CHECK(x.weight == ref::optimum(a));
  CHECK(exact_opt(b).set == x.set);
  CHECK(instance_text(a) == instance_text(b));
}

TEST_CASE("random instances") {
  const Instance empty = random_instance({.kind = ProblemKind::vertex_cover, .n = 10, .density = 0.0});
  CHECK(std::get<VertexCoverInstance>(empty).edges.empty());
  const Instance other = random_instance({.kind = ProblemKind::vertex_cover, .n = 12, .density = 0.3, .seed = 8});
  CHECK(other != random_instance({.kind = ProblemKind::vertex_cover, .n = 12, .density = 0.3, .seed = 7}));

  const auto hs = std::get<HittingSetInstance>(
      random_instance({.kind = ProblemKind::hitting_set, .n = 10, .density = 0.5, .d = 4, .seed = 1}));
  for (Subset s : hs.sets) {
    CHECK(s.size() >= 1);
    CHECK(s.size() <= 4);
  }
  const auto pvc = std::get<PartialVertexCoverInstance>(
      random_instance({.kind = ProblemKind::partial_vertex_cover, .n = 6, .density = 0.2, .threshold = 1000}));
  CHECK(pvc.threshold == static_cast<std::int64_t>(pvc.edges.size()));

  const Instance w = random_instance({.n = 12, .min_weight = 5, .max_weight = 9, .seed = 2});
  for (Weight x : weights_of(w)) {
    CHECK(x >= 5);
    CHECK(x <= 9);
  }
  CHECK_THROWS_AS(random_instance({.density = 1.5}), DomainError);
  CHECK_THROWS_AS(random_instance({.min_weight = 0}), DomainError);
}

TEST_CASE("normalize") {
  Instance vc = VertexCoverInstance{3, {1, 2, 3}, {{2, 1}, {1, 2}, {0, 1}}};
  normalize(vc);
  CHECK(std::get<VertexCoverInstance>(vc).edges == std::vector<Edge>{{0, 1}, {1, 2}});

  Instance fvs = FeedbackVertexSetInstance{2, {1, 1}, {{1, 0}, {0, 1}, {1, 1}}};
  normalize(fvs);
  CHECK(std::get<FeedbackVertexSetInstance>(fvs).edges == std::vector<Edge>{{0, 1}, {0, 1}, {1, 1}});

  Instance loop = VertexCoverInstance{2, {1, 1}, {{1, 1}}};
  CHECK_THROWS_AS(normalize(loop), DomainError);
  Instance zero = VertexCoverInstance{2, {1, 0}, {}};
  CHECK_THROWS_AS(normalize(zero), DomainError);
  Instance big_set = HittingSetInstance{3, {1, 1, 1}, 2, {Subset(7)}};
  CHECK_THROWS_AS(normalize(big_set), DomainError);
  Instance pvc = PartialVertexCoverInstance{2, {1, 1}, {{0, 1}}, 2};
  CHECK_THROWS_AS(normalize(pvc), DomainError);
}

TEST_CASE("parsing") {
  const Instance minimal = parse_instance_text("p wvc 2 1\nw 1 1\nw 2 1\ne 1 2\n");
  CHECK(kind_of(minimal) == ProblemKind::vertex_cover);
  CHECK(std::get<VertexCoverInstance>(minimal).edges.size() == 1);

  const Instance hs = parse_instance_text("# comment\np whs 3 2 2\nw 1 5\nw 2 1\nw 3 9\ns 2 1 2\ns 1 3\n");
  CHECK(std::get<HittingSetInstance>(hs).d == 2);
  CHECK(std::get<HittingSetInstance>(hs).sets.size() == 2);

  const Instance pvc = parse_instance_text("p wpvc 3 2 1\nw 1 1\nw 2 1\nw 3 1\ne 1 2\ne 2 3\n");
  CHECK(std::get<PartialVertexCoverInstance>(pvc).threshold == 1);

  try {
    parse_instance_text("p wvc 2 1\nw 1 0\nw 2 1\ne 1 2\n");
    FAIL("weight 0 accepted");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("weights must be >= 1") != std::string::npos);
  }
  try {
    parse_instance_text("p wvc 2 1\nw 1 1\nw 2 1\ne 1 3\n");
    FAIL("out-of-range vertex accepted");
  } catch (const ParseError& e) {
    CHECK(e.line() == 4);
  }
  CHECK_THROWS_AS(parse_instance_text(""), ParseError);
  CHECK_THROWS_AS(parse_instance_text("p wvc 2 1\nw 1 1\nw 2 1\n"), ParseError);
  CHECK_THROWS_AS(parse_instance_text("p xyz 2 0\n"), ParseError);
}

TEST_CASE("round trip") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    for (ProblemKind kind : {ProblemKind::vertex_cover, ProblemKind::hitting_set, ProblemKind::feedback_vertex_set,
                             ProblemKind::partial_vertex_cover}) {
      Instance inst = random_instance({.kind = kind, .n = 7, .density = 0.4, .threshold = 3, .seed = seed});
      const Instance back = parse_instance_text(instance_text(inst));
      normalize(inst);
      CHECK(back == inst);
    }
  }
}

TEST_CASE("tags") {
  for (ProblemKind k : {ProblemKind::vertex_cover, ProblemKind::hitting_set, ProblemKind::feedback_vertex_set,
                        ProblemKind::partial_vertex_cover}) {
    CHECK(problem_kind_from_tag(problem_tag(k)) == k);
  }
  CHECK(problem_tag(ProblemKind::feedback_vertex_set) == "wfvs");
  CHECK_THROWS_AS(problem_kind_from_tag("tsp"), DomainError);
}

TEST_CASE("membership oracle counts queries") {
  const Instance inst = triangle_vc();
  MembershipOracle oracle(inst);
  CHECK_FALSE(oracle(Subset{}));
  CHECK(oracle(Subset::full(3)));
  CHECK(oracle.queries() == 2);
}

}  // TEST_SUITE
