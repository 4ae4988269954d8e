#include <numeric>
#include <random>

#include "doctest.h"
#include "support.hpp"

using namespace partact;

TEST_SUITE_BEGIN("exactalg");

TEST_CASE("rational arithmetic is exact and normalized") {
  CHECK(Rat(2, 4) == Rat(1, 2));
  CHECK(Rat(1, 3) + Rat(1, 6) == Rat(1, 2));
  CHECK(Rat(-2, -4) == Rat(1, 2));
  CHECK((Rat(3, 7) * Rat(7, 3)).is_one());
  CHECK(Rat(1, 2).inv() == Rat(2));
  CHECK_THROWS_AS(Rat(1, 0), ArgumentError);
  CHECK_THROWS_AS(Rat(1) / Rat(0), ArgumentError);
  RatField Q;
  CHECK(Q.parse("3/7") == Rat(3, 7));
  CHECK(Q.display(Rat(-3, 7)) == "-3/7");

  SUBCASE("overflow throws instead of rounding") {
    Rat big(INT64_MAX / 2, 1);
    CHECK_THROWS_AS(big * big, OverflowError);
  }
}

TEST_CASE("prime field arithmetic") {
  FpField F5(5);
  CHECK(F5.parse("7") == Mod(2, 5));
  CHECK(Mod(2, 5) * Mod(3, 5) == Mod(1, 5));
  CHECK(Mod(2, 5).inv() == Mod(3, 5));
  CHECK(F5.display(Mod(2, 5)) == "2 mod 5");
  CHECK_THROWS_AS(FpField(4), SchemaError);
  CHECK_THROWS_AS(Mod(0, 5).inv(), ArgumentError);
}

TEST_CASE("split algebras") {
  RatField Q;
  CHECK_THROWS_AS(Algebra<RatField>::split(Q, 0), ArgumentError);

  auto k1 = Algebra<RatField>::split(Q, 1);
  CHECK(k1->mul(k1->basis_vec(0), k1->basis_vec(0)) == k1->basis_vec(0));

  auto r = Algebra<RatField>::split(Q, 4);
  Vec<RatField> one = r->zero();
  for (int i = 0; i < 4; ++i) one[static_cast<size_t>(i)] = Q.one();
  auto u = unit_of_ideal(Ideal<RatField>::full(r));
  REQUIRE(u.has_value());
  CHECK(*u == one);

  FpField F3(3);
  auto s = Algebra<FpField>::split(F3, 2);
  CHECK(s->is_associative());
  CHECK(s->mul(s->basis_vec(0), s->basis_vec(1)) == s->zero());
}

TEST_CASE("non-associative structure constants are rejected") {
  RatField Q;
  // e0 e0 = e1, e0 e1 = e0, everything else 0: (e0 e0) e0 = e0 but
  // e0 (e0 e0) = e0 e1 = e0 ... make it genuinely broken
  std::vector<std::vector<Vec<RatField>>> t(2, std::vector<Vec<RatField>>(2, zero_vec(Q, 2)));
  t[0][0] = {Q.zero(), Q.one()};  // e0^2 = e1
  t[1][0] = {Q.one(), Q.zero()};  // e1 e0 = e0
  CHECK_THROWS_AS(Algebra<RatField>::from_table(Q, {"a", "b"}, t, true), SchemaError);
}

TEST_CASE("ideal products") {
  RatField Q;
  auto r = Algebra<RatField>::split(Q, 4);
  auto e = [&](int i) { return r->basis_vec(i); };
  Ideal<RatField> i1 = Ideal<RatField>::span(r, {e(0)});
  Ideal<RatField> i12 = Ideal<RatField>::span(r, {e(0), e(1)});
  Ideal<RatField> i34 = Ideal<RatField>::span(r, {e(2), e(3)});

  CHECK(ideal_product(i1, i1) == i1);            // D_g^2 = D_g
  CHECK(ideal_product(i12, i34).is_zero());      // orthogonal idempotents
  CHECK(ideal_product(i12, i1) == ideal_product(i1, i12));
  CHECK(ideal_product(ideal_product(i12, i34), i1) == ideal_product(i12, ideal_product(i34, i1)));

  auto other = Algebra<RatField>::split(Q, 3);
  CHECK_THROWS_AS(ideal_product(i1, Ideal<RatField>::full(other)), ArgumentError);
}

TEST_CASE("units of ideals") {
  RatField Q;
  auto r = Algebra<RatField>::split(Q, 4);
  auto e = [&](int i) { return r->basis_vec(i); };

  auto u = unit_of_ideal(Ideal<RatField>::span(r, {e(0), e(1)}));
  REQUIRE(u.has_value());
  CHECK(*u == vec_add<RatField>(e(0), e(1)));

  CHECK(unit_of_ideal(Ideal<RatField>::zero(r)) == r->zero());

  SUBCASE("a nilpotent ideal has none") {
    // dual numbers: a^2 = a, ax = xa = x, x^2 = 0
    std::vector<std::vector<Vec<RatField>>> t(2, std::vector<Vec<RatField>>(2, zero_vec(Q, 2)));
    t[0][0] = {Q.one(), Q.zero()};
    t[0][1] = {Q.zero(), Q.one()};
    t[1][0] = {Q.zero(), Q.one()};
    auto dual = Algebra<RatField>::from_table(Q, {"a", "x"}, t, true);
    Ideal<RatField> nil = Ideal<RatField>::span(dual, {dual->basis_vec(1)});
    CHECK(nil.is_ideal_of(Ideal<RatField>::full(dual)));
    CHECK(!unit_of_ideal(nil).has_value());
  }

  SUBCASE("a returned unit is idempotent and central") {
    Ideal<RatField> i = Ideal<RatField>::span(r, {e(1), e(3)});
    auto w = unit_of_ideal(i);
    REQUIRE(w.has_value());
    CHECK(r->mul(*w, *w) == *w);
    for (int j = 0; j < i.dim(); ++j)
      CHECK(r->mul(*w, i.basis_vec(j)) == r->mul(i.basis_vec(j), *w));
  }
}

TEST_CASE("inversion inside an ideal") {
  RatField Q;
  auto r = Algebra<RatField>::split(Q, 4);
  auto e = [&](int i) { return r->basis_vec(i); };
  Ideal<RatField> i1 = Ideal<RatField>::span(r, {e(0)});
  Ideal<RatField> i12 = Ideal<RatField>::span(r, {e(0), e(1)});

  Vec<RatField> neg = vec_scale<RatField>(Rat(-1), e(0));
  auto inv = invert_in_ideal(neg, i1);
  REQUIRE(inv.has_value());
  CHECK(*inv == neg);  // (-e1)^2 = e1

  auto unit = unit_of_ideal(i12);
  CHECK(invert_in_ideal(*unit, i12) == *unit);
  CHECK(!invert_in_ideal(e(0), i12).has_value());
  CHECK_THROWS_AS(invert_in_ideal(e(2), i12), ArgumentError);
  CHECK(invert_in_ideal(r->zero(), Ideal<RatField>::zero(r)) == r->zero());
}

TEST_CASE("subring closure") {
  RatField Q;
  auto r = Algebra<RatField>::split(Q, 4);
  auto e = [&](int i) { return r->basis_vec(i); };
  Vec<RatField> one = vec_add<RatField>(vec_add<RatField>(e(0), e(1)), vec_add<RatField>(e(2), e(3)));

  CHECK(subring_closure({one}, r).dim() == 1);
  Ideal<RatField> c = subring_closure({e(0), e(1)}, r);
  CHECK(c == Ideal<RatField>::span(r, {e(0), e(1)}));
  CHECK_THROWS_AS(subring_closure<RatField>({}, r), ArgumentError);

  SUBCASE("closure is idempotent on random inputs") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 25; ++trial) {
      std::vector<Vec<RatField>> gens;
      int count = 1 + static_cast<int>(rng() % 3);
      for (int i = 0; i < count; ++i) {
        Vec<RatField> v = r->zero();
        for (int j = 0; j < 4; ++j) v[static_cast<size_t>(j)] = Rat(static_cast<long long>(rng() % 5) - 2);
        gens.push_back(v);
      }
      Ideal<RatField> once = subring_closure(gens, r);
      if (once.dim() == 0) continue;
      std::vector<Vec<RatField>> rows;
      for (int i = 0; i < once.dim(); ++i) rows.push_back(once.basis_vec(i));
      CHECK(subring_closure(rows, r) == once);
    }
  }
}

TEST_CASE("results are independent of accumulation order") {
  RatField Q;
  auto r = Algebra<RatField>::split(Q, 4);
  std::vector<Vec<RatField>> terms;
  std::mt19937 rng(11);
  for (int i = 0; i < 8; ++i) {
    Vec<RatField> v = r->zero();
    for (int j = 0; j < 4; ++j) v[static_cast<size_t>(j)] = Rat(static_cast<long long>(rng() % 7) - 3, 1 + rng() % 4);
    terms.push_back(v);
  }
  Vec<RatField> fwd = r->zero(), rev = r->zero();
  for (auto& t : terms) fwd = vec_add<RatField>(fwd, t);
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) rev = vec_add<RatField>(rev, *it);
  CHECK(fwd == rev);
}

TEST_CASE("linear maps: flags and failure modes") {
  RatField Q;
  auto r = Algebra<RatField>::split(Q, 4);
  auto e = [&](int i) { return r->basis_vec(i); };
  Ideal<RatField> d12 = Ideal<RatField>::span(r, {e(0), e(1)});
  Ideal<RatField> d34 = Ideal<RatField>::span(r, {e(2), e(3)});

  LinearMap<RatField> swap = LinearMap<RatField>::from_pairs(d12, d34, {{e(0), e(2)}, {e(1), e(3)}});
  CHECK(swap.is_bijection_onto_codomain());
  CHECK(swap.is_multiplicative());
  CHECK(swap.inverse().apply(e(2)) == e(0));

  // e1 -> e3, e2 -> e3 + e4 is linear but not multiplicative:
  // phi(e2 e2) = e3 + e4 while phi(e2)^2 = e3 + e4 ... pick a genuinely bad one
  LinearMap<RatField> bad =
      LinearMap<RatField>::from_pairs(d12, d34, {{e(0), vec_add<RatField>(e(2), e(3))}, {e(1), e(3)}});
  Witness w;
  CHECK(!bad.is_multiplicative(&w));  // phi(e1 e2) = phi(0) = 0 but phi(e1)phi(e2) = e4

  CHECK_THROWS_AS(LinearMap<RatField>::from_pairs(d12, d34, {{e(0), e(2)}}), SchemaError);
}

TEST_SUITE_END();
