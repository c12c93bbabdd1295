#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "latwave/unipoly.hpp"

using namespace latwave;

namespace {
UniPoly linear(long a, long b) { return UniPoly({Rational(b), Rational(a)}); }  // a x + b
}  // namespace

TEST_CASE("division and gcd") {
  UniPoly f = linear(1, -2) * linear(1, -2) * linear(1, 3);  // (x-2)^2 (x+3)
  auto [q, r] = UniPoly::div_mod(f, linear(1, -2));
  CHECK(r.is_zero());
  CHECK(q == linear(1, -2) * linear(1, 3));
  CHECK(gcd(f, f.derivative()) == linear(1, -2).monic());
}

TEST_CASE("squarefree decomposition recovers multiplicities") {
  // (x-1)(x+2)^2 (x-3)^3
  UniPoly f = linear(1, -1) * linear(1, 2) * linear(1, 2) * linear(1, -3) * linear(1, -3) *
              linear(1, -3);
  auto levels = squarefree_decomposition(f);
  REQUIRE(levels.size() == 3);
  CHECK(levels[0] == linear(1, -1).monic());
  CHECK(levels[1] == linear(1, 2).monic());
  CHECK(levels[2] == linear(1, -3).monic());
}

TEST_CASE("sturm counting") {
  UniPoly f = linear(1, -1) * linear(1, 1) * (UniPoly({Rational(1), Rational(0), Rational(1)}));
  // roots +-1 and a complex pair
  CHECK(count_real_roots(f) == 2);
  SturmChain chain(linear(1, -1) * linear(1, 1));
  CHECK(chain.count_roots(Rational(0), Rational(2)) == 1);
  CHECK(chain.count_roots(Rational(-2), Rational(2)) == 2);
}

TEST_CASE("max real multiplicity reads the tower") {
  UniPoly quad_irr({Rational(2), Rational(0), Rational(1)});  // x^2 + 2
  CHECK(max_real_root_multiplicity(linear(1, 0) * linear(1, 0) * quad_irr) == 2);
  CHECK(max_real_root_multiplicity(quad_irr * quad_irr) == 0);  // complex double pair
  CHECK(max_real_root_multiplicity(linear(2, -1)) == 1);
  UniPoly quartic = linear(1, -5) * linear(1, -5) * linear(1, -5) * linear(1, -5);
  CHECK(max_real_root_multiplicity(quartic) == 4);
}

TEST_CASE("randomized multiplicity against constructed factorizations") {
  std::mt19937 rng(42);
  std::uniform_int_distribution<int> root(-4, 4);
  std::uniform_int_distribution<int> mult(1, 3);
  for (int trial = 0; trial < 200; ++trial) {
    int r1 = root(rng), m1 = mult(rng);
    int r2 = root(rng), m2 = mult(rng);
    if (r1 == r2) continue;
    UniPoly f = UniPoly::constant(Rational(1));
    for (int i = 0; i < m1; ++i) f = f * linear(1, -r1);
    for (int i = 0; i < m2; ++i) f = f * linear(1, -r2);
    CHECK(max_real_root_multiplicity(f) == static_cast<unsigned>(std::max(m1, m2)));
  }
}

TEST_CASE("witness interval isolates the heavy root") {
  UniPoly f = linear(1, -1) * linear(1, -1) * linear(1, 5);  // double root at 1
  auto w = witness_root_interval(f, 2);
  REQUIRE(w.has_value());
  CHECK(w->first < Rational(1));
  CHECK(Rational(1) <= w->second);
  CHECK(!witness_root_interval(linear(1, -1) * linear(1, 1), 2).has_value());
}
