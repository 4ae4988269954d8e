#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "partact/algebra.hpp"
#include "partact/groupoid.hpp"

namespace partact {

/// Total map on the composable pairs of a groupoid.
template <class T>
class PairTable {
 public:
  PairTable() = default;

  void set(int x, int y, T v) { _m[{x, y}] = std::move(v); }
  bool contains(int x, int y) const { return _m.count({x, y}) > 0; }
  const T& at(int x, int y) const {
    auto it = _m.find({x, y});
    if (it == _m.end()) throw ArgumentError("pair table has no entry for the requested pair");
    return it->second;
  }
  const std::map<std::pair<int, int>, T>& entries() const { return _m; }
  size_t size() const { return _m.size(); }

  friend bool operator==(const PairTable& a, const PairTable& b) { return a._m == b._m; }

 private:
  std::map<std::pair<int, int>, T> _m;
};

/// The triple alpha = ({D_g}, {alpha_g}, {w_{g,h}}): ideals of the acted-on
/// ring indexed by arrows, partial isomorphisms between them, and twists on
/// the composable pairs.  Nothing is assumed verified at construction;
/// verify_tpa is the gate.
template <class K>
struct TwistedPartialAction {
  Groupoid G;
  AlgebraPtr<K> R;
  std::vector<Ideal<K>> D;        // per arrow (identities included)
  std::vector<LinearMap<K>> alpha;  // per arrow, D_{g^-1} -> D_g
  PairTable<Vec<K>> w;            // per composable pair, element of D_g D_{gh}

  void check_shapes() const {
    if (!R) throw SchemaError("action has no ambient algebra");
    if (static_cast<int>(D.size()) != G.size() || static_cast<int>(alpha.size()) != G.size())
      throw SchemaError("action tables must cover every arrow");
    for (int g = 0; g < G.size(); ++g)
      if (!D[static_cast<size_t>(g)].ambient()->same_as(*R))
        throw SchemaError("ideal D(" + G.label(g) + ") lives in the wrong algebra");
    for (auto& [xy, val] : w.entries()) {
      if (!G.composable(xy.first, xy.second))
        throw SchemaError("twist declared on a non-composable pair");
      if (static_cast<int>(val.size()) != R->dim()) throw SchemaError("twist vector has wrong length");
    }
    for (auto [x, y] : G.composable_pairs())
      if (!w.contains(x, y))
        throw SchemaError("missing twist for composable pair (" + G.label(x) + "," + G.label(y) + ")");
  }

  const Ideal<K>& ideal(int g) const { return D[static_cast<size_t>(g)]; }
  const LinearMap<K>& map(int g) const { return alpha[static_cast<size_t>(g)]; }

  /// Unit of D_g, or nullopt when D_g is a nonzero non-unital ideal.
  std::optional<Vec<K>> unit(int g) const { return unit_of_ideal(D[static_cast<size_t>(g)]); }
};

namespace detail {

template <class K>
std::string pair_name(const Groupoid& g, int x, int y) {
  return "(" + g.label(x) + "," + g.label(y) + ")";
}

}  // namespace detail

/// The six-axiom verifier for a twisted partial action.  Quantified axioms
/// are swept over canonical bases of exactly the ideal products they name;
/// linearity makes those sweeps complete.  Order (i)..(vi), full report
/// (no fail-fast).
template <class K>
AxiomReport verify_tpa(const TwistedPartialAction<K>& act) {
  Stopwatch clock;
  act.check_shapes();
  require_valid(act.G);
  AxiomReport rep;
  rep.subject = "twisted partial action";
  const Groupoid& G = act.G;
  const auto& A = *act.R;
  auto L = [&](int i) { return G.label(i); };
  auto pairs = G.composable_pairs();
  auto triples = composable_tuples(G, 3);

  // Structural preamble: D_{r(g)} ideal of R, D_g ideal of D_{r(g)},
  // alpha_g an isomorphism of rings D_{g^-1} -> D_g.
  auto& shape = rep.add("ideal-chain");
  for (int g = 0; g < G.size(); ++g) {
    ++shape.checked;
    const auto& Drg = act.ideal(G.r(g));
    if (!act.ideal(g).is_ideal_of(Ideal<K>::full(act.R)))
      shape.fail({{L(g)}, "D(g) is not an ideal of the ambient ring"});
    if (!Drg.contains_subspace(act.ideal(g)) || !act.ideal(g).is_ideal_of(Drg))
      shape.fail({{L(g)}, "D(g) is not an ideal of D(r(g))"});
  }

  auto& iso = rep.add("alpha-isomorphism");
  for (int g = 0; g < G.size(); ++g) {
    ++iso.checked;
    const auto& m = act.map(g);
    if (m.domain() != act.ideal(G.inv(g)) || m.codomain() != act.ideal(g)) {
      iso.fail({{L(g)}, "alpha(g) is not declared D(g^-1) -> D(g)"});
      continue;
    }
    if (!m.is_bijection_onto_codomain()) iso.fail({{L(g)}, "alpha(g) is not bijective onto D(g)"});
    Witness w;
    if (!m.is_multiplicative(&w)) iso.fail({{L(g)}, "alpha(g) is not multiplicative: " + w.detail});
  }

  // Twists must live in D_g D_{gh} and be invertible there; a zero product
  // ideal forces w = 0 (the only multiplier of the zero ring).
  std::map<std::pair<int, int>, Ideal<K>> prod_ideal;
  std::map<std::pair<int, int>, Vec<K>> w_inv;
  auto& twist = rep.add("twist-invertible");
  for (auto [g, h] : pairs) {
    ++twist.checked;
    int gh = G.compose(g, h);
    Ideal<K> U = ideal_product(act.ideal(g), act.ideal(gh));
    prod_ideal.emplace(std::make_pair(g, h), U);
    const Vec<K>& wv = act.w.at(g, h);
    if (!U.contains(wv)) {
      twist.fail({{L(g), L(h)}, "w(g,h) lies outside D(g)D(gh)"});
      continue;
    }
    if (U.is_zero()) {
      w_inv.emplace(std::make_pair(g, h), A.zero());
      continue;  // w = 0 is the invertible multiplier of the zero ideal
    }
    if (!unit_of_ideal(U))
      throw UnsupportedCaseError("D(g)D(gh) at " + detail::pair_name<K>(G, g, h) +
                                 " is nonzero but has no unit; multiplier algebras of non-unital ideals are not modeled");
    auto inv = invert_in_ideal(wv, U);
    if (!inv) {
      twist.fail({{L(g), L(h)}, "w(g,h) is not invertible in D(g)D(gh)"});
      continue;
    }
    w_inv.emplace(std::make_pair(g, h), *inv);
  }

  // (i) D_g^2 = D_g and D_g D_h = D_h D_g
  auto& ax1 = rep.add("i");
  for (int g = 0; g < G.size(); ++g) {
    ++ax1.checked;
    if (ideal_product(act.ideal(g), act.ideal(g)) != act.ideal(g)) ax1.fail({{L(g)}, "D(g)^2 != D(g)"});
  }
  for (int g = 0; g < G.size(); ++g)
    for (int h = 0; h < G.size(); ++h) {
      ++ax1.checked;
      if (ideal_product(act.ideal(g), act.ideal(h)) != ideal_product(act.ideal(h), act.ideal(g)))
        ax1.fail({{L(g), L(h)}, "D(g)D(h) != D(h)D(g)"});
    }

  // (ii) alpha_e identity on D_e
  auto& ax2 = rep.add("ii");
  for (int e : G.identities()) {
    ++ax2.checked;
    const auto& m = act.map(e);
    for (int i = 0; i < act.ideal(e).dim(); ++i) {
      Vec<K> b = act.ideal(e).basis_vec(i);
      if (m.apply(b) != b) {
        ax2.fail({{L(e)}, "alpha(e) is not the identity on D(e)"});
        break;
      }
    }
  }

  // (iii) alpha_g(D_{g^-1} D_h) = D_g D_{gh}
  auto& ax3 = rep.add("iii");
  for (auto [g, h] : pairs) {
    ++ax3.checked;
    Ideal<K> dom = ideal_product(act.ideal(G.inv(g)), act.ideal(h));
    Ideal<K> img = act.map(g).image_of(dom);
    if (img != prod_ideal.at({g, h})) ax3.fail({{L(g), L(h)}, "alpha(g)(D(g^-1)D(h)) != D(g)D(gh)"});
  }

  // (iv) alpha_g ∘ alpha_h (a) = w(g,h) alpha_{gh}(a) w(g,h)^-1 on
  //      D_{h^-1} D_{h^-1 g^-1}
  auto& ax4 = rep.add("iv");
  for (auto [g, h] : pairs) {
    if (!w_inv.count({g, h})) continue;  // already reported above
    int gh = G.compose(g, h);
    Ideal<K> dom = ideal_product(act.ideal(G.inv(h)), act.ideal(G.inv(gh)));
    const Vec<K>& wv = act.w.at(g, h);
    const Vec<K>& wi = w_inv.at({g, h});
    for (int i = 0; i < dom.dim(); ++i) {
      ++ax4.checked;
      Vec<K> a = dom.basis_vec(i);
      Vec<K> lhs = act.map(g).apply(act.map(h).apply(a));
      Vec<K> rhs = A.mul(A.mul(wv, act.map(gh).apply(a)), wi);
      if (lhs != rhs)
        ax4.fail({{L(g), L(h)}, "a=" + A.show(a) + ": " + A.show(lhs) + " != " + A.show(rhs)});
    }
  }

  // (v) w(r(g),g) = w(g,d(g)) = 1_g
  auto& ax5 = rep.add("v");
  for (int g = 0; g < G.size(); ++g) {
    ++ax5.checked;
    auto one =
        act.ideal(g).is_zero() ? std::optional<Vec<K>>(A.zero()) : unit_of_ideal(act.ideal(g));
    if (!one)
      throw UnsupportedCaseError("D(" + L(g) + ") is nonzero but has no unit; id_M(D_g) is not representable");
    if (act.w.at(G.r(g), g) != *one) ax5.fail({{L(g)}, "w(r(g),g) != 1_g"});
    if (act.w.at(g, G.d(g)) != *one) ax5.fail({{L(g)}, "w(g,d(g)) != 1_g"});
  }

  // (vi) alpha_g(a w(h,t)) w(g,ht) = alpha_g(a) w(g,h) w(gh,t) on
  //      D_{g^-1} D_h D_{ht}
  auto& ax6 = rep.add("vi");
  for (auto& t3 : triples) {
    int g = t3[0], h = t3[1], t = t3[2];
    int ht = G.compose(h, t);
    Ideal<K> dom = ideal_product(ideal_product(act.ideal(G.inv(g)), act.ideal(h)), act.ideal(ht));
    for (int i = 0; i < dom.dim(); ++i) {
      ++ax6.checked;
      Vec<K> a = dom.basis_vec(i);
      Vec<K> lhs = A.mul(act.map(g).apply(A.mul(a, act.w.at(h, t))), act.w.at(g, ht));
      Vec<K> rhs = A.mul(A.mul(act.map(g).apply(a), act.w.at(g, h)), act.w.at(G.compose(g, h), t));
      if (lhs != rhs)
        ax6.fail({{L(g), L(h), L(t)}, "a=" + A.show(a) + ": " + A.show(lhs) + " != " + A.show(rhs)});
    }
  }

  rep.wall_ms = clock.ms();
  return rep;
}

/// Global <=> D_g = D_{r(g)} canonically, for every arrow.
template <class K>
bool is_global(const TwistedPartialAction<K>& act) {
  for (int g = 0; g < act.G.size(); ++g)
    if (act.ideal(g) != act.ideal(act.G.r(g))) return false;
  return true;
}

template <class K>
struct RestrictionResult {
  TwistedPartialAction<K> action;  // on the materialized ideal algebra
  SubalgebraView<K> view;          // embedding back into the parent ring
};

/// Restriction of a global action to a unital two-sided ideal, the standard
/// construction: D_{r(g)} = R·E_{r(g)}, D_g = D_{r(g)}·beta_g(D_{d(g)}),
/// alpha_g the restriction of beta_g, w_{g,h} = u_{g,h}·1_g·1_{gh}.
template <class K>
RestrictionResult<K> restrict_global(const TwistedPartialAction<K>& b, const Ideal<K>& Rideal) {
  if (!is_global(b)) throw ArgumentError("restrict_global needs a global action");
  if (!Rideal.ambient()->same_as(*b.R)) throw ArgumentError("restrict_global: ideal lives in the wrong ring");
  if (!Rideal.is_ideal_of(Ideal<K>::full(b.R))) throw ArgumentError("restrict_global: subspace is not an ideal");
  auto unitR = unit_of_ideal(Rideal);
  if (!unitR) throw ArgumentError("restrict_global: the ideal has no unit");
  for (int g = 0; g < b.G.size(); ++g)
    if (!b.ideal(g).is_zero() && !unit_of_ideal(b.ideal(g)))
      throw UnsupportedCaseError("restrict_global: E(" + b.G.label(g) + ") has no unit");

  const Groupoid& G = b.G;
  const auto& A = *b.R;
  std::vector<Ideal<K>> D(static_cast<size_t>(G.size()), Ideal<K>::zero(b.R));
  for (int e : G.identities()) D[static_cast<size_t>(e)] = ideal_product(Rideal, b.ideal(e));
  for (int g = 0; g < G.size(); ++g) {
    if (G.is_identity(g)) continue;
    Ideal<K> img = b.map(g).image_of(D[static_cast<size_t>(G.d(g))]);
    D[static_cast<size_t>(g)] = ideal_product(D[static_cast<size_t>(G.r(g))], img);
  }

  // assemble in parent coordinates, then carve out R' as its own algebra
  SubalgebraView<K> view = materialize_subalgebra(b.R, Rideal, "r");
  TwistedPartialAction<K> out;
  out.G = G;
  out.R = view.sub;
  for (int g = 0; g < G.size(); ++g) out.D.push_back(view.lift(D[static_cast<size_t>(g)]));
  for (int g = 0; g < G.size(); ++g) {
    const Ideal<K>& dom = out.D[static_cast<size_t>(G.inv(g))];
    const Ideal<K>& cod = out.D[static_cast<size_t>(g)];
    Mat<K> img(view.sub->field(), dom.dim(), view.sub->dim());
    for (int i = 0; i < dom.dim(); ++i)
      img.set_row(i, view.to_sub(b.map(g).apply(view.to_parent(dom.basis_vec(i)))));
    out.alpha.emplace_back(dom, cod, img);
  }
  for (auto [g, h] : G.composable_pairs()) {
    int gh = G.compose(g, h);
    Vec<K> oneg = D[static_cast<size_t>(g)].is_zero() ? A.zero() : *unit_of_ideal(D[static_cast<size_t>(g)]);
    Vec<K> onegh = D[static_cast<size_t>(gh)].is_zero() ? A.zero() : *unit_of_ideal(D[static_cast<size_t>(gh)]);
    Vec<K> wv = A.mul(A.mul(b.w.at(g, h), oneg), onegh);
    out.w.set(g, h, view.to_sub(wv));
  }
  return RestrictionResult<K>{std::move(out), std::move(view)};
}

}  // namespace partact
