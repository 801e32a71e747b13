#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "reference.hpp"
#include "wamls/errors.hpp"
#include "wamls/families.hpp"

using namespace wamls;

namespace {

Weights uniform(int n) { return Weights(static_cast<std::size_t>(n), 1); }

bool has_set(const CoveringFamily& f, Subset s) { return std::find(f.sets.begin(), f.sets.end(), s) != f.sets.end(); }

}  // namespace

TEST_SUITE("families") {

TEST_CASE("unweighted covering small cases") {
  const CoveringFamily f0 = build_unweighted_covering(0, 1.5);
  REQUIRE(f0.sets.size() == 1);
  CHECK(f0.sets[0].empty());

  const CoveringFamily f1 = build_unweighted_covering(1, 2.0);
  CHECK(has_set(f1, Subset{}));
  CHECK(has_set(f1, Subset::full(1)));

  CHECK_THROWS_AS(build_unweighted_covering(4, 1.0), DomainError);
  CHECK_THROWS_AS(build_unweighted_covering(30, 2.0, 20), ResourceError);
}

TEST_CASE("unweighted covering is valid against a naive checker") {
  for (int n = 0; n <= 10; ++n) {
    for (double alpha : {1.25, 1.5, 2.0, 3.0}) {
      CAPTURE(n);
      CAPTURE(alpha);
      const CoveringFamily f = build_unweighted_covering(n, alpha);
      CHECK(has_set(f, Subset::full(n)));
      CHECK_FALSE(ref::covering_violation(f, uniform(n)).has_value());
      CHECK(verify_covering(f, uniform(n)).pass);
    }
  }
  // Strictly smaller than the power set once alpha leaves room.
  CHECK(build_unweighted_covering(10, 2.0).sets.size() < 1024);
}

TEST_CASE("unweighted extension small cases") {
  const ExtensionFamily e0 = build_unweighted_extension(0, 1.0, 2.0, 1.5);
  REQUIRE(e0.entries.size() == 1);
  CHECK(e0.entries[0] == ExtensionEntry{Subset{}, 0});

  const ExtensionFamily e8 = build_unweighted_extension(8, 1.0, 2.0, 1.5);
  CHECK(verify_extension(e8, uniform(8)).pass);
  CHECK_FALSE(ref::extension_violation(e8, uniform(8)).has_value());

  // alpha <= beta: the single entry (empty, n) is already valid.
  const ExtensionFamily degenerate{5, 2.0, 2.0, {{Subset{}, 5}}};
  CHECK(verify_extension(degenerate, uniform(5)).pass);
  CHECK(verify_extension(build_unweighted_extension(5, 2.0, 1.0, 2.0), uniform(5)).pass);

  CHECK_THROWS_AS(build_unweighted_extension(4, 1.0, 2.0, 1.0), DomainError);
  CHECK_THROWS_AS(build_unweighted_extension(4, 0.5, 2.0, 1.5), DomainError);
}

TEST_CASE("unweighted extension is valid against a naive checker") {
  for (int n = 0; n <= 10; ++n) {
    for (double alpha : {1.0, 2.0}) {
      for (double beta : {1.2, 1.5, 2.0}) {
        for (double c : {1.0, 2.0}) {
          CAPTURE(n);
          CAPTURE(alpha);
          CAPTURE(beta);
          CAPTURE(c);
          const ExtensionFamily f = build_unweighted_extension(n, alpha, c, beta);
          CHECK_FALSE(ref::extension_violation(f, uniform(n)).has_value());
          const bool has_empty = std::any_of(f.entries.begin(), f.entries.end(),
                                             [](const ExtensionEntry& e) { return e.set.empty(); });
          CHECK(has_empty);
          for (const ExtensionEntry& e : f.entries) {
            CHECK(e.budget >= 0);
            CHECK(e.budget <= n);
          }
        }
      }
    }
  }
}

TEST_CASE("verifiers report the least violating subset") {
  std::vector<Subset> all;
  for (std::uint64_t m = 0; m < 16; ++m) all.emplace_back(m);
  CoveringFamily power{4, 1.0, all};
  CHECK(verify_covering(power, Weights{3, 1, 4, 1}).pass);

  CoveringFamily missing_u = power;
  missing_u.sets.pop_back();
  const Verdict v = verify_covering(missing_u, Weights{3, 1, 4, 1});
  CHECK_FALSE(v.pass);
  CHECK(*v.witness == Subset::full(4));

  ExtensionFamily identity{4, 1.0, 1.0, {}};
  for (Subset s : all) identity.entries.push_back({s, 0});
  CHECK(verify_extension(identity, Weights{3, 1, 4, 1}).pass);

  ExtensionFamily no_empty{3, 1.0, 2.0, {{Subset(1), 3}, {Subset(7), 0}}};
  const Verdict e = verify_extension(no_empty, Weights{1, 1, 1});
  CHECK_FALSE(e.pass);
  CHECK(e.witness->empty());
}

TEST_CASE("verifiers agree with the naive checker on random families") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + trial % 7;
    Weights w(static_cast<std::size_t>(n));
    for (Weight& x : w) x = std::uniform_int_distribution<Weight>(1, 20)(rng);
    std::uniform_int_distribution<std::uint64_t> mask(0, (std::uint64_t{1} << n) - 1);

    CoveringFamily cov{n, 1.0 + (trial % 4) * 0.5, {}};
    ExtensionFamily ext{n, 1.0 + (trial % 2), 1.2 + (trial % 3) * 0.4, {}};
    for (int i = 0; i < 2 + trial % 9; ++i) {
      cov.sets.emplace_back(mask(rng));
      ext.entries.push_back({Subset(mask(rng)), std::uniform_int_distribution<int>(0, n)(rng)});
    }
    normalize(cov);
    normalize(ext);
    const auto cv = ref::covering_violation(cov, w);
    const Verdict vc = verify_covering(cov, w);
    CHECK(vc.pass == !cv.has_value());
    if (cv) CHECK(vc.witness->bits() == *cv);

    const auto ev = ref::extension_violation(ext, w);
    const Verdict ve = verify_extension(ext, w);
    CHECK(ve.pass == !ev.has_value());
    if (ev) CHECK(ve.witness->bits() == *ev);

    // Scaling the weights does not change the verdicts.
    Weights scaled = w;
    for (Weight& x : scaled) x *= 7;
    CHECK(verify_covering(cov, scaled).pass == vc.pass);
    CHECK(verify_extension(ext, scaled).pass == ve.pass);
  }
}

TEST_CASE("adding entries keeps a valid family valid") {
  std::mt19937_64 rng(5);
  ExtensionFamily f = build_unweighted_extension(7, 1.0, 2.0, 1.5);
  CoveringFamily g = build_unweighted_covering(7, 1.5);
  for (int i = 0; i < 20; ++i) {
    f.entries.push_back({Subset(rng() & 0x7F), static_cast<int>(rng() % 8)});
    g.sets.emplace_back(rng() & 0x7F);
    CHECK(verify_extension(f, uniform(7)).pass);
    CHECK(verify_covering(g, uniform(7)).pass);
  }
}

TEST_CASE("family cost") {
  CHECK(family_cost({0, 1.0, 1.0, {{Subset{}, 0}}}, 2.0) == 0.0);
  const ExtensionFamily two{1, 1.0, 1.5, {{Subset{}, 3}, {Subset(1), 1}}};
  CHECK(family_cost(two, 2.0) == doctest::Approx(std::log(10.0)).epsilon(1e-14));
  CHECK(family_cost({0, 1.0, 1.0, {}}, 2.0) == -INFINITY);

  const ExtensionFamily f = build_unweighted_extension(9, 1.0, 3.0, 1.4);
  double naive = 0.0;
  for (const ExtensionEntry& e : f.entries) naive += std::pow(3.0, e.budget);
  CHECK(family_cost(f, 3.0) == doctest::Approx(std::log(naive)).epsilon(1e-9));
  CHECK(family_cost(f, 1.0) == doctest::Approx(std::log(static_cast<double>(f.entries.size()))).epsilon(1e-12));
}

TEST_CASE("normalize removes exact duplicates only") {
  ExtensionFamily f{2, 1.0, 1.5, {{Subset(1), 1}, {Subset(1), 0}, {Subset(1), 1}, {Subset{}, 2}}};
  normalize(f);
  CHECK(f.entries.size() == 3);
  CHECK(std::is_sorted(f.entries.begin(), f.entries.end()));
  CoveringFamily g{2, 1.5, {Subset(3), Subset(1), Subset(3)}};
  normalize(g);
  CHECK(g.sets == std::vector<Subset>{Subset(1), Subset(3)});
}

TEST_CASE("dump round trip") {
  const ExtensionFamily f = build_unweighted_extension(6, 2.0, 1.0, 1.7);
  std::stringstream io;
  write_family(io, f, {"made by a test"});
  const AnyFamily back = read_family(io);
  REQUIRE(std::holds_alternative<ExtensionFamily>(back));
  const ExtensionFamily& g = std::get<ExtensionFamily>(back);
  CHECK(g.universe_size == 6);
  CHECK(g.alpha == 2.0);
  CHECK(g.beta == 1.7);
  CHECK(g.entries == f.entries);

  const CoveringFamily c = build_unweighted_covering(5, 1.5);
  std::stringstream io2;
  write_family(io2, c);
  const AnyFamily back2 = read_family(io2);
  REQUIRE(std::holds_alternative<CoveringFamily>(back2));
  CHECK(std::get<CoveringFamily>(back2).sets == c.sets);
  CHECK(std::get<CoveringFamily>(back2).alpha == 1.5);
}

TEST_CASE("dump parse errors carry line numbers") {
  const auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return read_family(in);
  };
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(parse("family covering n=2 alpha=1.5\n# ok\nzz\n"), ParseError);
  try {
    parse("family covering n=2 alpha=1.5\n# ok\n7\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(parse("family extension n=2 alpha=1 beta=1.5\n1\n"), ParseError);
  CHECK_THROWS_AS(parse("family extension n=2 alpha=1 beta=1.5\n1 -1\n"), ParseError);
  CHECK_THROWS_AS(parse("family blob n=2\n"), ParseError);
}

TEST_CASE("hex subsets") {
  CHECK(to_hex(Subset{}) == "0");
  CHECK(to_hex(Subset(0xABC)) == "abc");
  CHECK(subset_from_hex("abc") == Subset(0xABC));
  CHECK(subset_from_hex("FF") == Subset(0xFF));
  CHECK_THROWS_AS(subset_from_hex("xyz"), DomainError);
}

}  // TEST_SUITE
