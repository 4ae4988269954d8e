#pragma once

// Shared fixtures: the four-arrow worked example, its extension data, and
// the randomized corpora used by the property suites.

#include <random>

#include "partact/crossprod.hpp"
#include "partact/globalize.hpp"

namespace testsupport {

using namespace partact;

/// The groupoid { g, g^-1, r(g), d(g) } with arrows ordered g, g-, rg, dg.
inline Groupoid four_arrow_groupoid() {
  return Groupoid::from_tables({"g", "g-", "rg", "dg"},
                               {{0, 1, 2}, {1, 0, 3}, {2, 0, 0}, {0, 3, 0},
                                {1, 2, 1}, {3, 1, 1}, {2, 2, 2}, {3, 3, 3}},
                               {{0, 1}, {2, 2}, {3, 3}});
}

/// The worked twisted partial action on K^4: D_rg = <e1,e2>, D_dg = <e3,e4>,
/// D_g = <e1>, D_g- = <e3>, alpha_g(e3) = e1, w(g,g-) = -e1, w(g-,g) = -e3.
template <class K>
TwistedPartialAction<K> pair_action(const K& f, AlgebraPtr<K> R) {
  Groupoid G = four_arrow_groupoid();
  auto e = [&](int i) { return R->basis_vec(i); };
  auto sp = [&](std::vector<Vec<K>> v) { return Ideal<K>::span(R, v); };
  TwistedPartialAction<K> a;
  a.G = G;
  a.R = R;
  a.D = {sp({e(0)}), sp({e(2)}), sp({e(0), e(1)}), sp({e(2), e(3)})};
  a.alpha.push_back(LinearMap<K>::from_pairs(a.D[1], a.D[0], {{e(2), e(0)}}));
  a.alpha.push_back(LinearMap<K>::from_pairs(a.D[0], a.D[1], {{e(0), e(2)}}));
  a.alpha.push_back(LinearMap<K>::identity(a.D[2]));
  a.alpha.push_back(LinearMap<K>::identity(a.D[3]));
  Vec<K> e12 = vec_add<K>(e(0), e(1)), e34 = vec_add<K>(e(2), e(3));
  a.w.set(2, 2, e12);
  a.w.set(3, 3, e34);
  a.w.set(2, 0, e(0));
  a.w.set(0, 3, e(0));
  a.w.set(3, 1, e(2));
  a.w.set(1, 2, e(2));
  a.w.set(0, 1, vec_scale<K>(f.from_long(-1), e(0)));
  a.w.set(1, 0, vec_scale<K>(f.from_long(-1), e(2)));
  return a;
}

template <class K>
TwistedPartialAction<K> pair_action(const K& f) {
  return pair_action(f, Algebra<K>::split(f, 4));
}

/// The extendability data wt that globalizes the worked action.
template <class K>
ExtensionData<K> pair_extension(const K& f, const Algebra<K>& R) {
  ExtensionData<K> ext;
  Vec<K> e12 = vec_add<K>(R.basis_vec(0), R.basis_vec(1));
  Vec<K> e34 = vec_add<K>(R.basis_vec(2), R.basis_vec(3));
  ext.wt.set(2, 2, e12);
  ext.wt.set(2, 0, e12);
  ext.wt.set(0, 3, e12);
  ext.wt.set(3, 3, e34);
  ext.wt.set(3, 1, e34);
  ext.wt.set(1, 2, e34);
  ext.wt.set(0, 1, vec_scale<K>(f.from_long(-1), e12));
  ext.wt.set(1, 0, vec_scale<K>(f.from_long(-1), e34));
  return ext;
}

/// The one-arrow groupoid acting on K itself with trivial twist.
template <class K>
TwistedPartialAction<K> trivial_action(const K& f) {
  auto R = Algebra<K>::split(f, 1);
  TwistedPartialAction<K> a;
  a.G = Groupoid::trivial();
  a.R = R;
  a.D = {Ideal<K>::full(R)};
  a.alpha.push_back(LinearMap<K>::identity(a.D[0]));
  a.w.set(0, 0, R->basis_vec(0));
  return a;
}

// ---- randomized corpora ----------------------------------------------------

inline Groupoid random_groupoid(std::mt19937& rng) {
  auto pick = [&](int lo, int hi) { return lo + static_cast<int>(rng() % (hi - lo + 1)); };
  auto base = [&]() -> Groupoid {
    switch (pick(0, 3)) {
      case 0: return Groupoid::trivial();
      case 1: return Groupoid::cyclic_group(pick(2, 4));
      case 2: return Groupoid::pair_groupoid(2);
      default: return Groupoid::pair_groupoid(3);
    }
  };
  Groupoid g = base();
  if (pick(0, 2) == 0) g = Groupoid::disjoint_union(g, base());
  return g;
}

/// A random split-algebra global twisted action: one block of idempotents
/// per object, beta_g the block bijections of a fixed labeling, and the
/// twist a random coboundary u(g,h) = nu_g beta_g(nu_h) nu_{gh}^-1 (which
/// satisfies the cocycle law by construction).
template <class K>
TwistedPartialAction<K> random_global_action(const K& f, std::mt19937& rng, int block_size) {
  Groupoid G = random_groupoid(rng);
  auto objects = G.identities();
  int m = block_size;
  int n = m * static_cast<int>(objects.size());
  auto R = Algebra<K>::split(f, n);
  auto object_pos = [&](int e) {
    for (size_t i = 0; i < objects.size(); ++i)
      if (objects[i] == e) return static_cast<int>(i);
    throw std::logic_error("unknown object");
  };

  auto block_ideal = [&](int e) {
    std::vector<Vec<K>> rows;
    for (int i = 0; i < m; ++i) rows.push_back(R->basis_vec(object_pos(e) * m + i));
    return Ideal<K>::span(R, rows);
  };

  TwistedPartialAction<K> act;
  act.G = G;
  act.R = R;
  for (int g = 0; g < G.size(); ++g) act.D.push_back(block_ideal(G.r(g)));
  for (int g = 0; g < G.size(); ++g) {
    // beta_g : block(d(g)) -> block(r(g)), matching coordinates
    std::vector<std::pair<Vec<K>, Vec<K>>> pairs;
    for (int i = 0; i < m; ++i)
      pairs.push_back({R->basis_vec(object_pos(G.d(g)) * m + i), R->basis_vec(object_pos(G.r(g)) * m + i)});
    act.alpha.push_back(
        LinearMap<K>::from_pairs(act.D[static_cast<size_t>(G.inv(g))], act.D[static_cast<size_t>(g)], pairs));
  }

  // random invertible diagonal nu_g in the r(g)-block, nu_e = 1
  auto random_unit = [&]() -> typename K::Elem {
    if constexpr (K::finite) {
      return f.element(1 + static_cast<long long>(rng() % (f.size() - 1)));
    } else {
      static const long long nums[] = {1, -1, 2, -2, 3, 1, -1, 2};
      static const long long dens[] = {1, 1, 1, 1, 1, 2, 3, 3};
      size_t i = rng() % 8;
      return Rat(nums[i], dens[i]);
    }
  };
  std::vector<Vec<K>> nu;
  for (int g = 0; g < G.size(); ++g) {
    Vec<K> v = R->zero();
    for (int i = 0; i < m; ++i) {
      auto c = G.is_identity(g) ? f.one() : random_unit();
      v[static_cast<size_t>(object_pos(G.r(g)) * m + i)] = c;
    }
    nu.push_back(v);
  }
  auto unit_of_block = [&](int e) {
    Vec<K> v = R->zero();
    for (int i = 0; i < m; ++i) v[static_cast<size_t>(object_pos(e) * m + i)] = f.one();
    return v;
  };
  auto invert_diag = [&](const Vec<K>& v, int e) {
    Vec<K> out = R->zero();
    for (int i = 0; i < m; ++i) {
      size_t at = static_cast<size_t>(object_pos(e) * m + i);
      out[at] = f.one() / v[at];
    }
    return out;
  };
  for (auto [g, h] : G.composable_pairs()) {
    int gh = G.compose(g, h);
    Vec<K> u = R->mul(R->mul(nu[static_cast<size_t>(g)], act.map(g).apply(nu[static_cast<size_t>(h)])),
                      invert_diag(nu[static_cast<size_t>(gh)], G.r(g)));
    (void)unit_of_block;
    act.w.set(g, h, u);
  }
  return act;
}

/// Random unital ideal of a split algebra: the span of a nonempty subset of
/// the basis idempotents.
template <class K>
Ideal<K> random_unital_ideal(const Algebra<K>& R, AlgebraPtr<K> Rp, std::mt19937& rng) {
  std::vector<Vec<K>> rows;
  for (int i = 0; i < R.dim(); ++i)
    if (rng() % 2) rows.push_back(R.basis_vec(i));
  if (rows.empty()) rows.push_back(R.basis_vec(static_cast<int>(rng() % R.dim())));
  return Ideal<K>::span(Rp, rows);
}

struct GroupoidMutation {
  Groupoid mutated;
  std::string what;
};

/// Corrupt one table entry of a valid groupoid; used to confirm the axiom
/// sweep always notices.
inline GroupoidMutation mutate_groupoid(const Groupoid& g, std::mt19937& rng) {
  int n = g.size();
  std::vector<std::array<int, 3>> triples;
  std::vector<std::pair<int, int>> invs;
  for (int x = 0; x < n; ++x) {
    invs.emplace_back(x, g.inv(x));
    for (int y = 0; y < n; ++y)
      if (g.composable(x, y)) triples.push_back({x, y, g.compose(x, y)});
  }
  for (int attempt = 0; attempt < 200; ++attempt) {
    int kind = static_cast<int>(rng() % 4);
    auto t2 = triples;
    auto i2 = invs;
    std::string what;
    if (kind == 0 && !t2.empty()) {  // rewrite a product value
      auto& t = t2[rng() % t2.size()];
      int nv = static_cast<int>(rng() % n);
      if (nv == t[2]) continue;
      what = "product value changed";
      t[2] = nv;
    } else if (kind == 1 && t2.size() > 1) {  // delete a defined product
      size_t at = rng() % t2.size();
      what = "product deleted";
      t2.erase(t2.begin() + static_cast<long>(at));
    } else if (kind == 2) {  // add an undefined product
      int x = static_cast<int>(rng() % n), y = static_cast<int>(rng() % n);
      if (g.composable(x, y)) continue;
      t2.push_back({x, y, static_cast<int>(rng() % n)});
      what = "undefined product added";
    } else if (n > 1) {  // repoint an inverse
      int x = static_cast<int>(rng() % n);
      int nv = static_cast<int>(rng() % n);
      if (nv == g.inv(x)) continue;
      // keep the inverse table single-valued: rebuild it as a raw map
      std::vector<std::pair<int, int>> raw;
      for (int a = 0; a < n; ++a) raw.emplace_back(a, a == x ? nv : g.inv(a));
      // from_tables symmetrizes pairs, which may conflict; skip those
      try {
        GroupoidMutation mut{Groupoid::from_tables(g.labels(), t2, raw), "inverse repointed"};
        return mut;
      } catch (const SchemaError&) {
        continue;
      }
    } else {
      continue;
    }
    try {
      return GroupoidMutation{Groupoid::from_tables(g.labels(), t2, i2), what};
    } catch (const SchemaError&) {
      continue;  // structural rejection also counts as detection, but prefer
                 // mutations that survive to the axiom sweep
    }
  }
  throw std::logic_error("could not build a mutated groupoid");
}

}  // namespace testsupport
