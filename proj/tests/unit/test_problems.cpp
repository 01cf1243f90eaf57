#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "hsq/error.hpp"
#include "hsq/modular.hpp"
#include "hsq/problems.hpp"

using namespace hsq;

TEST_CASE("Simon tables are two-to-one with hidden xor shift") {
  for (unsigned n = 2; n <= 10; ++n) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const auto s = build_simon(n, std::nullopt, seed);
      REQUIRE(s.a != 0);
      REQUIRE(s.a < (1ULL << n));
      CHECK(s.oracle.balanced());
      CHECK(spectrum(s.oracle).size() == (1ULL << (n - 1)));
      for (std::size_t x = 0; x < s.oracle.domain_size(); ++x) CHECK(s.oracle(x) == s.oracle(x ^ s.a));
      CHECK(s.oracle(0) == 0);
      CHECK(s.oracle(s.a) == 0);
      CHECK(brute_simon(s.oracle) == s.a);
    }
  }
  CHECK_THROWS_AS(build_simon(4, 0, 1), Error);
  CHECK_THROWS_AS(build_simon(4, 16, 1), Error);
  CHECK_THROWS_AS(build_simon(1, std::nullopt, 1), Error);
  CHECK_THROWS_AS(build_simon(25, std::nullopt, 1), Error);
}

TEST_CASE("random target moves the zero-valued pair") {
  std::set<Value> at_zero;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = build_simon(5, 7, seed, TargetMode::Random);
    CHECK(s.oracle.min_value() == 0);
    for (std::size_t x = 0; x < 32; ++x) {
      if (s.oracle(x) == 0) at_zero.insert(std::min<Value>(x, x ^ 7));
    }
  }
  CHECK(at_zero.size() > 1);
}

TEST_CASE("factoring tables") {
  const auto f = build_factoring(15, 2);
  CHECK(f.n == 5);
  CHECK(f.r == 4);
  CHECK(f.oracle.domain_size() == 32);
  for (std::size_t k = 0; k < 32; ++k) CHECK(f.oracle(k) == powmod(2, k, 15));
  CHECK(brute_order(15, 14) == 2);
  CHECK(brute_order(21, 2) == 6);
  try {
    build_factoring(15, 5);
    FAIL("expected NonCoprimeBase");
  } catch (const NonCoprimeBase& e) {
    CHECK(e.factor() == 5);
  }
  CHECK_THROWS_AS(build_factoring(15, 1), Error);
}

TEST_CASE("discrete-log tables") {
  const auto d = build_dlog(15, 2, 3);
  CHECK(d.r == 4);
  CHECK(d.b == 8);
  CHECK(d.R == 15);
  CHECK(d.oracle.domain_size() == 225);
  CHECK(d.oracle(1 * d.R + 1) == 1);
  CHECK(brute_dlog(15, 2, 8) == 3);
  for (std::size_t j = 0; j < d.oracle.domain_size(); ++j) {
    const auto [x1, x2] = d.split(j);
    CHECK((d.oracle(j) == 1) == ((3 * x1 + x2) % 4 == 0));
  }
}

TEST_CASE("dihedral cosets pair x with (1, x + l)") {
  for (std::uint64_t N = 2; N <= 20; ++N) {
    for (std::uint64_t l = 0; l < N; ++l) {
      const auto d = build_dihedral(N, l, N * 31 + l);
      CHECK(d.oracle.balanced());
      CHECK(brute_dihedral(d.oracle, N) == l);
      for (std::uint64_t x = 0; x < N; ++x) CHECK(d.oracle(x) == d.oracle(N + (x + l) % N));
      CHECK(d.oracle(0) == 0);
    }
  }
}

TEST_CASE("periodic tables") {
  const auto p = build_period(3, 6, 1);
  CHECK(p.oracle.domain_size() == 64);
  for (std::size_t x = 0; x + 3 < 64; ++x) CHECK(p.oracle(x) == p.oracle(x + 3));
  CHECK(p.oracle(0) == 0);
}

TEST_CASE("permutation helpers") {
  CHECK(factorial(5) == 120);
  CHECK(unrank_permutation(3, 0) == Permutation{0, 1, 2});
  CHECK(unrank_permutation(3, 5) == Permutation{2, 1, 0});
  CHECK(unrank_permutation(4, 9) == Permutation{1, 2, 3, 0});
  const Permutation p{2, 0, 1}, q{1, 2, 0};
  CHECK(compose(p, q) == Permutation{0, 1, 2});
  CHECK(inverse(p) == q);
}

TEST_CASE("graph pair embedding") {
  // Two labelings of the path on three vertices.
  const GraphPair g(3, {{0, 1}, {1, 2}}, {{0, 2}, {2, 1}});
  CHECK(g.y_size() == 72);
  CHECK(g.q_size() == 36);
  CHECK(g.permutation(0) == Permutation{0, 1, 2, 3, 4, 5});
  CHECK(g.permutation(36) == g.sigma());
  CHECK(g.sigma() == Permutation{3, 4, 5, 0, 1, 2});
  // |Aut(A)| = 2 |Aut(P3)|^2 when the graphs are isomorphic.
  CHECK(g.automorphisms().size() == 8);
  CHECK(g.oracle().balanced());
  CHECK(g.oracle().min_value() == 1);
  CHECK(spectrum(g.oracle()).size() == 9);
  const auto iso = brute_iso(g.edges_1(), g.edges_2(), 3);
  CHECK(iso.isomorphic);
  CHECK(is_isomorphism(g.edges_1(), g.edges_2(), iso.witness));

  const GraphPair h(3, {{0, 1}, {1, 2}}, {{0, 2}});
  CHECK(h.automorphisms().size() == 4);
  CHECK_FALSE(brute_iso(h.edges_1(), h.edges_2(), 3).isomorphic);

  CHECK_THROWS_AS(GraphPair(3, {{0, 3}}, {}), Error);
  CHECK_THROWS_AS(GraphPair(3, {{1, 1}}, {}), Error);
  CHECK_THROWS_AS(GraphPair(3, {{0, 1}, {1, 0}}, {}), Error);
  CHECK_THROWS_AS(GraphPair(6, {}, {}), Error);
}

TEST_CASE("graph oracle ids are dense and one-based") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const GraphPair g(4, {{0, 1}, {1, 2}, {2, 3}}, {{0, 1}, {0, 2}, {0, 3}}, seed);
    const auto s = spectrum(g.oracle());
    std::vector<Value> want(s.size());
    std::iota(want.begin(), want.end(), Value{1});
    CHECK(s.distinct_values == want);
    for (std::size_t j : g.automorphisms()) CHECK(g.oracle()(j) == 1);
  }
}
