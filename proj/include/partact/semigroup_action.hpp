#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "partact/action.hpp"
#include "partact/crossprod.hpp"
#include "partact/ksemigroup.hpp"
#include "partact/partrep.hpp"

namespace partact {

/// Groupoid twisted partial action on a K-semigroup: ideals S_x (each a
/// monoid), isomorphisms theta_x, and the K-valued twisting sigma.
struct SemigroupTPA {
  Groupoid G;
  KSemigroupPtr S;
  std::vector<std::vector<char>> member;  // per arrow: indicator over S (zero always in)
  std::vector<std::vector<int>> theta;    // per arrow: elementwise map, -1 off S_{x^-1}
  PartialFactorSet<FpField> sigma;

  bool in(int x, int s) const { return member[static_cast<size_t>(x)][static_cast<size_t>(s)] != 0; }
  std::vector<int> members_of(int x) const {
    std::vector<int> out;
    for (int s = 0; s < S->size(); ++s)
      if (in(x, s)) out.push_back(s);
    return out;
  }
  int apply(int x, int s) const { return theta[static_cast<size_t>(x)][static_cast<size_t>(s)]; }

  /// Identity of the monoid S_x, or -1 when none exists.
  int unit_of(int x) const {
    for (int e = 0; e < S->size(); ++e) {
      if (!in(x, e)) continue;
      bool ok = true;
      for (int s = 0; s < S->size() && ok; ++s)
        if (in(x, s)) ok = S->mul(e, s) == s && S->mul(s, e) == s;
      if (ok) return e;
    }
    return -1;
  }
};

/// Definitions 6.1 and 6.2 swept exhaustively, plus the remark's identity
/// S_x ∩ S_y = S_x S_y.
inline AxiomReport verify_semigroup_tpa(const SemigroupTPA& t) {
  Stopwatch clock;
  require_valid(t.G);
  AxiomReport rep;
  rep.subject = "semigroup twisted partial action";
  const Groupoid& G = t.G;
  const KSemigroup& S = *t.S;
  auto L = [&](int i) { return G.label(i); };
  int n = S.size();

  auto& shape = rep.add("shapes");
  shape.checked = 1;
  if (static_cast<int>(t.member.size()) != G.size() || static_cast<int>(t.theta.size()) != G.size())
    shape.fail({{}, "per-arrow tables missing"});
  if (!shape.pass) {
    rep.wall_ms = clock.ms();
    return rep;
  }

  auto& ideal = rep.add("S_x-ideal");
  for (int x = 0; x < G.size(); ++x) {
    ++ideal.checked;
    if (!t.in(x, S.zero)) ideal.fail({{L(x)}, "S_x does not contain 0"});
    for (int s = 0; s < n; ++s) {
      if (!t.in(x, s)) continue;
      for (int u = 0; u < n; ++u)
        if (!t.in(x, S.mul(u, s)) || !t.in(x, S.mul(s, u))) {
          ideal.fail({{L(x)}, "S_x is not a two-sided ideal"});
          u = n;
          s = n;
        }
    }
  }

  auto& monoid = rep.add("S_x-monoid");
  std::vector<int> unit(static_cast<size_t>(G.size()), -1);
  for (int x = 0; x < G.size(); ++x) {
    ++monoid.checked;
    unit[static_cast<size_t>(x)] = t.unit_of(x);
    if (unit[static_cast<size_t>(x)] < 0) monoid.fail({{L(x)}, "S_x has no identity element"});
  }

  auto& iso = rep.add("theta-isomorphism");
  for (int x = 0; x < G.size(); ++x) {
    ++iso.checked;
    int xi = G.inv(x);
    std::set<int> image;
    bool ok = true;
    for (int s = 0; s < n; ++s) {
      int v = t.apply(x, s);
      if (t.in(xi, s) != (v >= 0)) {
        iso.fail({{L(x)}, "theta_x domain differs from S_{x^-1}"});
        ok = false;
        break;
      }
      if (v < 0) continue;
      if (!t.in(x, v)) {
        iso.fail({{L(x)}, "theta_x image leaves S_x"});
        ok = false;
        break;
      }
      image.insert(v);
    }
    if (!ok) continue;
    std::vector<int> sx = t.members_of(x);
    if (image.size() != sx.size() || !std::equal(image.begin(), image.end(), sx.begin()))
      iso.fail({{L(x)}, "theta_x is not a bijection onto S_x"});
    for (int a = 0; a < n && iso.pass; ++a) {
      if (!t.in(xi, a)) continue;
      for (int b = 0; b < n; ++b) {
        if (!t.in(xi, b)) continue;
        if (t.apply(x, S.mul(a, b)) != S.mul(t.apply(x, a), t.apply(x, b))) {
          iso.fail({{L(x)}, "theta_x is not multiplicative"});
          break;
        }
      }
      for (long long k = 0; k < S.p; ++k)
        if (t.apply(x, S.act(k, a)) != S.act(k, t.apply(x, a))) {
          iso.fail({{L(x)}, "theta_x is not a K-map"});
          break;
        }
    }
  }

  auto& d61i = rep.add("i");
  for (int x = 0; x < G.size(); ++x) {
    ++d61i.checked;
    for (int s = 0; s < n; ++s)
      if (t.in(x, s) && !t.in(G.r(x), s)) {
        d61i.fail({{L(x)}, "S_x not inside S_{r(x)}"});
        break;
      }
  }
  for (int e : G.identities()) {
    ++d61i.checked;
    for (int s = 0; s < n; ++s)
      if (t.in(e, s) && t.apply(e, s) != s) {
        d61i.fail({{L(e)}, "theta_e is not the identity"});
        break;
      }
  }

  auto intersect = [&](int x, int y) {
    std::vector<int> out;
    for (int s = 0; s < n; ++s)
      if (t.in(x, s) && t.in(y, s)) out.push_back(s);
    return out;
  };

  auto& d61ii = rep.add("ii");
  for (auto [x, y] : G.composable_pairs()) {
    ++d61ii.checked;
    std::set<int> lhs;
    for (int s : intersect(G.inv(x), y)) lhs.insert(t.apply(x, s));
    auto rhs = intersect(x, G.compose(x, y));
    if (lhs.size() != rhs.size() || !std::equal(lhs.begin(), lhs.end(), rhs.begin()))
      d61ii.fail({{L(x), L(y)}, "theta_x(S_{x^-1} ∩ S_y) != S_x ∩ S_{xy}"});
  }

  auto& d61iii = rep.add("iii");
  for (auto [x, y] : G.composable_pairs()) {
    int xy = G.compose(x, y);
    for (int s : intersect(G.inv(y), G.inv(xy))) {
      ++d61iii.checked;
      if (t.apply(x, t.apply(y, s)) != t.apply(xy, s)) {
        d61iii.fail({{L(x), L(y)}, "theta_x theta_y != theta_xy on the stated domain"});
        break;
      }
    }
  }

  auto& d62iv = rep.add("iv");
  for (int x = 0; x < G.size(); ++x)
    for (int y = 0; y < G.size(); ++y) {
      ++d62iv.checked;
      if (!G.composable(x, y)) {
        if (!t.sigma.at(x, y).is_zero()) d62iv.fail({{L(x), L(y)}, "sigma nonzero off G^2"});
        continue;
      }
      bool zero_meet = intersect(x, G.compose(x, y)).size() <= 1;  // only 0
      if (t.sigma.at(x, y).is_zero() != zero_meet)
        d62iv.fail({{L(x), L(y)}, "sigma(x,y) = 0 not equivalent to S_x ∩ S_{xy} = 0"});
    }

  auto& d62v = rep.add("v");
  for (int x = 0; x < G.size(); ++x) {
    ++d62v.checked;
    if (!t.sigma.at(x, G.d(x)).is_one() || !t.sigma.at(G.r(x), x).is_one())
      d62v.fail({{L(x)}, "sigma(x,d(x)) or sigma(r(x),x) != 1"});
  }

  auto& d62vi = rep.add("vi");
  for (auto& tr : composable_tuples(G, 3)) {
    int x = tr[0], y = tr[1], z = tr[2];
    int xy = G.compose(x, y), xyz = G.compose(xy, z);
    bool meet = false;
    for (int s = 0; s < n; ++s)
      if (s != S.zero && t.in(x, s) && t.in(xy, s) && t.in(xyz, s)) {
        meet = true;
        break;
      }
    if (!meet) continue;
    ++d62vi.checked;
    auto lhs = t.sigma.at(x, y) * t.sigma.at(xy, z);
    auto rhs = t.sigma.at(y, z) * t.sigma.at(x, G.compose(y, z));
    if (lhs != rhs) d62vi.fail({{L(x), L(y), L(z)}, "twisting 2-cocycle fails"});
  }

  auto& meetprod = rep.add("intersection-is-product");
  for (auto [x, y] : G.composable_pairs()) {
    ++meetprod.checked;
    std::set<int> prod;
    for (int s : t.members_of(x))
      for (int u : t.members_of(y)) prod.insert(S.mul(s, u));
    auto meet = intersect(x, y);
    if (prod.size() != meet.size() || !std::equal(prod.begin(), prod.end(), meet.begin()))
      meetprod.fail({{L(x), L(y)}, "S_x ∩ S_y != S_x S_y"});
  }

  rep.wall_ms = clock.ms();
  return rep;
}

/// S x|_{theta,sigma} G as the quotient L/I: elements a delta_x with
/// 0 != a in S_x, plus a single absorbed zero.
struct SemigroupCrossedProduct {
  KSemigroupPtr S;                           // the crossed product itself
  std::vector<std::pair<int, int>> labels;   // id -> (arrow, carrier element); id 0 = zero
  std::map<std::pair<int, int>, int> index;  // (arrow, carrier element) -> id
  std::vector<int> unit_elem;                // arrow -> carrier id of 1_x
  std::vector<int> gamma_theta;              // arrow -> id of 1_x delta_x

  int id_of(int arrow, int carrier_elem) const {
    auto it = index.find({arrow, carrier_elem});
    if (it == index.end()) throw ArgumentError("element is not a crossed-product label");
    return it->second;
  }
};

inline SemigroupCrossedProduct build_semigroup_crossed_product(const SemigroupTPA& t) {
  const Groupoid& G = t.G;
  const KSemigroup& S = *t.S;

  SemigroupCrossedProduct out;
  out.labels.emplace_back(-1, -1);  // zero
  for (int x = 0; x < G.size(); ++x) {
    int u = t.unit_of(x);
    if (u < 0) throw ArgumentError("S(" + G.label(x) + ") is not a monoid; crossed product refused");
    out.unit_elem.push_back(u);
    for (int s : t.members_of(x)) {
      if (s == S.zero) continue;
      out.index.emplace(std::make_pair(x, s), static_cast<int>(out.labels.size()));
      out.labels.emplace_back(x, s);
    }
  }

  auto scp = std::make_shared<KSemigroup>();
  int m = static_cast<int>(out.labels.size());
  scp->p = S.p;
  scp->zero = 0;
  scp->labels.resize(static_cast<size_t>(m));
  scp->labels[0] = "0";
  for (int i = 1; i < m; ++i) {
    auto [x, s] = out.labels[static_cast<size_t>(i)];
    scp->labels[static_cast<size_t>(i)] = S.label(s) + ".d" + G.label(x);
  }
  scp->mul_table.assign(static_cast<size_t>(m), std::vector<int>(static_cast<size_t>(m), 0));
  scp->act_table.assign(static_cast<size_t>(S.p), std::vector<int>(static_cast<size_t>(m), 0));

  auto inverse_theta = [&](int x, int v) {
    // theta_x is a verified bijection S_{x^-1} -> S_x; invert by scan
    for (int s = 0; s < S.size(); ++s)
      if (t.apply(x, s) == v) return s;
    throw ArgumentError("theta(" + G.label(x) + ") has no preimage for a crossed-product component");
  };

  for (int i = 1; i < m; ++i) {
    auto [x, a] = out.labels[static_cast<size_t>(i)];
    for (int j = 1; j < m; ++j) {
      auto [y, b] = out.labels[static_cast<size_t>(j)];
      if (!G.composable(x, y)) continue;
      const Mod& sg = t.sigma.at(x, y);
      if (sg.is_zero()) continue;
      int c = t.apply(x, S.mul(inverse_theta(x, a), b));
      if (c < 0)
        throw ArgumentError("theta_x^-1(a) b left S(" + G.label(G.inv(x)) + "); the ideals are not ideals");
      c = S.act(sg, c);
      if (c == S.zero) continue;
      scp->mul_table[static_cast<size_t>(i)][static_cast<size_t>(j)] = out.id_of(G.compose(x, y), c);
    }
  }
  for (long long k = 0; k < S.p; ++k)
    for (int i = 1; i < m; ++i) {
      auto [x, a] = out.labels[static_cast<size_t>(i)];
      int ka = S.act(k, a);
      scp->act_table[static_cast<size_t>(k)][static_cast<size_t>(i)] = ka == S.zero ? 0 : out.id_of(x, ka);
    }

  out.S = scp;
  for (int x = 0; x < G.size(); ++x) {
    int u = out.unit_elem[static_cast<size_t>(x)];
    out.gamma_theta.push_back(u == S.zero ? 0 : out.id_of(x, u));
  }
  return out;
}

// ---- the ring <-> semigroup correspondence -------------------------------

namespace detail_ksem {

inline int rank_vec(long long p, const Vec<FpField>& v) {
  long long id = 0, base = 1;
  for (auto& c : v) {
    id += c.value() * base;
    base *= p;
  }
  return static_cast<int>(id);
}

inline Vec<FpField> unrank_vec(long long p, int dim, int id) {
  Vec<FpField> v(static_cast<size_t>(dim), Mod(0, p));
  long long rest = id;
  for (int i = 0; i < dim; ++i) {
    v[static_cast<size_t>(i)] = Mod(rest % p, p);
    rest /= p;
  }
  return v;
}

}  // namespace detail_ksem

/// The multiplicative K-semigroup (A, ·) of a finite-field algebra, with
/// elements ranked by their coefficient vectors.
struct RingSemigroupAction {
  AlgebraPtr<FpField> A;
  KSemigroupPtr S;
  SemigroupTPA t;

  int rank(const Vec<FpField>& v) const { return detail_ksem::rank_vec(A->field().p, v); }
  Vec<FpField> unrank(int id) const { return detail_ksem::unrank_vec(A->field().p, A->dim(), id); }
};

/// A ring action whose twists are all scalar multiples of the
/// relevant unit becomes a semigroup action with sigma(x,y) = k(x,y).
/// A non-scalar twist is a structured unsupported-case error naming the pair.
inline RingSemigroupAction ring_to_semigroup(const TwistedPartialAction<FpField>& act,
                                             long long element_cap = 100000) {
  act.check_shapes();
  const Groupoid& G = act.G;
  const auto& A = *act.R;
  FpField f = A.field();

  long long count = 1;
  for (int i = 0; i < A.dim(); ++i) {
    count *= f.p;
    if (count > element_cap) throw CapacityError("multiplicative semigroup too large to materialize");
  }

  RingSemigroupAction out;
  out.A = act.R;

  auto rank = [&](const Vec<FpField>& v) { return detail_ksem::rank_vec(f.p, v); };
  auto unrank = [&](int id) { return detail_ksem::unrank_vec(f.p, A.dim(), id); };

  auto S = std::make_shared<KSemigroup>();
  S->p = f.p;
  S->zero = 0;
  int n = static_cast<int>(count);
  S->labels.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) S->labels[static_cast<size_t>(i)] = A.show(unrank(i));
  S->mul_table.assign(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(n), 0));
  S->act_table.assign(static_cast<size_t>(f.p), std::vector<int>(static_cast<size_t>(n), 0));
  out.S = S;
  out.t.S = S;

  // fill tables through the algebra product
  {
    std::vector<Vec<FpField>> vecs;
    vecs.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) vecs.push_back(unrank(i));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        S->mul_table[static_cast<size_t>(i)][static_cast<size_t>(j)] =
            rank(A.mul(vecs[static_cast<size_t>(i)], vecs[static_cast<size_t>(j)]));
    for (long long k = 0; k < f.p; ++k)
      for (int i = 0; i < n; ++i)
        S->act_table[static_cast<size_t>(k)][static_cast<size_t>(i)] =
            rank(vec_scale<FpField>(Mod(k, f.p), vecs[static_cast<size_t>(i)]));
  }

  out.t.G = G;
  out.t.sigma = PartialFactorSet<FpField>(f, G);
  out.t.member.assign(static_cast<size_t>(G.size()), std::vector<char>(static_cast<size_t>(n), 0));
  out.t.theta.assign(static_cast<size_t>(G.size()), std::vector<int>(static_cast<size_t>(n), -1));

  for (int x = 0; x < G.size(); ++x) {
    const Ideal<FpField>& D = act.ideal(x);
    // enumerate the whole subspace
    std::vector<int> digits(static_cast<size_t>(D.dim()), 0);
    while (true) {
      Vec<FpField> v = A.zero();
      for (int i = 0; i < D.dim(); ++i) {
        Vec<FpField> b = D.basis_vec(i);
        for (size_t c = 0; c < v.size(); ++c) v[c] += Mod(digits[static_cast<size_t>(i)], f.p) * b[c];
      }
      out.t.member[static_cast<size_t>(x)][static_cast<size_t>(rank(v))] = 1;
      int pos = 0;
      while (pos < D.dim() && ++digits[static_cast<size_t>(pos)] == f.p) digits[static_cast<size_t>(pos++)] = 0;
      if (pos == D.dim()) break;
    }
  }
  for (int x = 0; x < G.size(); ++x)
    for (int s = 0; s < n; ++s)
      if (out.t.member[static_cast<size_t>(G.inv(x))][static_cast<size_t>(s)])
        out.t.theta[static_cast<size_t>(x)][static_cast<size_t>(s)] =
            rank(act.map(x).apply(unrank(s)));

  for (auto [x, y] : G.composable_pairs()) {
    Ideal<FpField> U = ideal_product(act.ideal(x), act.ideal(G.compose(x, y)));
    const Vec<FpField>& wv = act.w.at(x, y);
    if (U.is_zero()) {
      if (!is_zero_vec<FpField>(wv))
        throw UnsupportedCaseError("twist at (" + G.label(x) + "," + G.label(y) + ") nonzero on a zero ideal");
      continue;  // sigma stays 0
    }
    auto unit = unit_of_ideal(U);
    if (!unit)
      throw UnsupportedCaseError("D(" + G.label(x) + ")D(" + G.label(G.compose(x, y)) +
                                 ") has no unit; scalar form undecidable");
    bool found = false;
    for (long long k = 1; k < f.p && !found; ++k)
      if (vec_scale<FpField>(Mod(k, f.p), *unit) == wv) {
        out.t.sigma.at(x, y) = Mod(k, f.p);
        found = true;
      }
    if (!found)
      throw UnsupportedCaseError("twist at (" + G.label(x) + "," + G.label(y) +
                                 ") is not a scalar multiple of the unit of D_x D_{xy}");
  }
  return out;
}

/// Reconstruct the ring action from the labeled semigroup one.
inline TwistedPartialAction<FpField> semigroup_to_ring(const RingSemigroupAction& rsa) {
  const Groupoid& G = rsa.t.G;
  const auto& A = *rsa.A;
  FpField f = A.field();
  TwistedPartialAction<FpField> act;
  act.G = G;
  act.R = rsa.A;

  for (int x = 0; x < G.size(); ++x) {
    std::vector<Vec<FpField>> vs;
    for (int s : rsa.t.members_of(x)) vs.push_back(rsa.unrank(s));
    Ideal<FpField> D = Ideal<FpField>::span(rsa.A, vs);
    // the member set must be the whole subspace, or the additive structure
    // was lost on the way
    long long expect = 1;
    for (int i = 0; i < D.dim(); ++i) expect *= f.p;
    if (static_cast<long long>(vs.size()) != expect)
      throw UnsupportedCaseError("S(" + G.label(x) + ") is not the full point set of a linear ideal");
    act.D.push_back(std::move(D));
  }
  for (int x = 0; x < G.size(); ++x) {
    std::vector<std::pair<Vec<FpField>, Vec<FpField>>> pairs;
    for (int s : rsa.t.members_of(G.inv(x)))
      pairs.push_back({rsa.unrank(s), rsa.unrank(rsa.t.apply(x, s))});
    act.alpha.push_back(
        LinearMap<FpField>::from_pairs(act.D[static_cast<size_t>(G.inv(x))], act.D[static_cast<size_t>(x)], pairs));
  }
  for (auto [x, y] : G.composable_pairs()) {
    Ideal<FpField> U = ideal_product(act.D[static_cast<size_t>(x)], act.D[static_cast<size_t>(G.compose(x, y))]);
    if (U.is_zero()) {
      act.w.set(x, y, A.zero());
      continue;
    }
    auto unit = unit_of_ideal(U);
    if (!unit) throw UnsupportedCaseError("reconstructed D_x D_{xy} has no unit");
    act.w.set(x, y, vec_scale<FpField>(rsa.t.sigma.at(x, y), *unit));
  }
  return act;
}

/// The map a delta_x -> a delta_x embeds the semigroup crossed product
/// into the multiplicative semigroup of the ring crossed product; injective
/// and multiplicative always, surjective exactly for the trivial group.
inline AxiomReport embed_semigroup_cp(const TwistedPartialAction<FpField>& act) {
  Stopwatch clock;
  AxiomReport rep;
  rep.subject = "semigroup crossed product embedding";
  FpField f = act.R->field();

  RingSemigroupAction rsa = ring_to_semigroup(act);
  SemigroupCrossedProduct scp = build_semigroup_crossed_product(rsa.t);
  CrossedProduct<FpField> cp = build_crossed_product(act);

  auto image = [&](int id) -> Vec<FpField> {
    if (id == 0) return cp.alg->zero();
    auto [x, s] = scp.labels[static_cast<size_t>(id)];
    return cp.embed(x, rsa.unrank(s));
  };

  int m = scp.S->size();
  auto& inj = rep.add("injective");
  {
    std::set<Vec<FpField>> seen;
    for (int i = 0; i < m; ++i) {
      ++inj.checked;
      if (!seen.insert(image(i)).second) inj.fail({{scp.S->label(i)}, "two elements share an image"});
    }
  }

  auto& hom = rep.add("multiplicative");
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      ++hom.checked;
      Vec<FpField> lhs = image(scp.S->mul(i, j));
      Vec<FpField> rhs = cp.alg->mul(image(i), image(j));
      if (lhs != rhs) hom.fail({{scp.S->label(i), scp.S->label(j)}, "phi(PQ) != phi(P)phi(Q)"});
    }

  auto& kmap = rep.add("K-map");
  for (int i = 0; i < m; ++i) {
    ++kmap.checked;
    for (long long k = 0; k < f.p; ++k)
      if (image(scp.S->act(k, i)) != vec_scale<FpField>(Mod(k, f.p), image(i))) {
        kmap.fail({{scp.S->label(i)}, "phi(k P) != k phi(P)"});
        break;
      }
  }

  auto& surj = rep.add("surjective-iff-trivial-group");
  {
    long long ring_count = 1;
    bool over = false;
    for (int i = 0; i < cp.dim(); ++i) {
      ring_count *= f.p;
      if (ring_count > 4000000) {
        over = true;
        break;
      }
    }
    ++surj.checked;
    bool surjective = !over && ring_count == static_cast<long long>(m);
    bool trivial = act.G.size() == 1;
    if (surjective != trivial)
      surj.fail({{}, surjective ? "surjective although the groupoid is not the trivial group"
                                : "not surjective although the groupoid is the trivial group"});
    if (!surjective) {
      // the remark's witness: a sum across two distinct arrows is not hit
      int g1 = -1, g2 = -1;
      for (int x = 0; x < act.G.size() && g2 < 0; ++x)
        if (act.ideal(x).dim() > 0) (g1 < 0 ? g1 : g2) = x;
      if (g2 >= 0) {
        Vec<FpField> wv = vec_add<FpField>(cp.embed(g1, act.ideal(g1).basis_vec(0)),
                                           cp.embed(g2, act.ideal(g2).basis_vec(0)));
        bool hit = false;
        for (int i = 0; i < m && !hit; ++i) hit = image(i) == wv;
        if (hit) surj.fail({{act.G.label(g1), act.G.label(g2)}, "cross-arrow sum unexpectedly in the image"});
        surj.note = "witness outside the image: a d" + act.G.label(g1) + " + b d" + act.G.label(g2);
      }
    }
  }

  rep.wall_ms = clock.ms();
  return rep;
}

// ---- bridges between representations and semigroup actions ---------------

/// BFS closure of a generator list under product and scalar action,
/// materialized as a KSemigroup.
template <class M>
struct ClosureSemigroup {
  std::vector<typename M::value_type> elems;  // index 0 = zero, rest sorted by model order
  KSemigroupPtr S;

  int index_of(const M& model, const typename M::value_type& v) const {
    if (model.equal(v, elems[0])) return 0;
    auto cmp = [&model](const typename M::value_type& a, const typename M::value_type& b) {
      return model.less(a, b);
    };
    auto it = std::lower_bound(elems.begin() + 1, elems.end(), v, cmp);
    if (it == elems.end() || !model.equal(*it, v)) return -1;
    return static_cast<int>(it - elems.begin());
  }
};

template <class M>
ClosureSemigroup<M> closure_semigroup(const M& model, std::vector<typename M::value_type> gens,
                                      size_t cap = 20000) {
  using V = typename M::value_type;
  auto cmp = [&model](const V& a, const V& b) { return model.less(a, b); };
  std::map<V, int, decltype(cmp)> index(cmp);
  std::vector<V> elems;

  auto add = [&](const V& v) -> bool {
    if (index.count(v)) return false;
    index.emplace(v, static_cast<int>(elems.size()));
    elems.push_back(v);
    if (elems.size() > cap) throw CapacityError("semigroup closure exceeded its cap");
    return true;
  };
  add(model.zero);
  std::vector<V> queue = gens;
  for (auto& g : gens) add(g);
  while (!queue.empty()) {
    V cur = queue.back();
    queue.pop_back();
    std::vector<V> snapshot = elems;
    for (auto& other : snapshot) {
      for (V prod : {model.mul(cur, other), model.mul(other, cur)})
        if (add(prod)) queue.push_back(prod);
    }
    for (long long k = 0; k < model.f.size(); ++k) {
      V scaled = model.scale(model.f.element(k), cur);
      if (add(scaled)) queue.push_back(scaled);
    }
  }

  // reindex with zero first, then deterministic model order
  std::vector<V> ordered;
  ordered.push_back(model.zero);
  for (auto& [v, i] : index)
    if (!model.equal(v, model.zero)) ordered.push_back(v);

  ClosureSemigroup<M> out;
  out.elems = std::move(ordered);
  auto table = std::make_shared<KSemigroup>();
  int n = static_cast<int>(out.elems.size());
  table->p = model.f.size();
  table->zero = 0;
  table->labels.resize(static_cast<size_t>(n));
  std::map<V, int, decltype(cmp)> where(cmp);
  for (int i = 0; i < n; ++i) {
    table->labels[static_cast<size_t>(i)] = model.show(out.elems[static_cast<size_t>(i)]);
    where.emplace(out.elems[static_cast<size_t>(i)], i);
  }
  table->mul_table.assign(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(n), 0));
  table->act_table.assign(static_cast<size_t>(table->p), std::vector<int>(static_cast<size_t>(n), 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      auto it = where.find(model.mul(out.elems[static_cast<size_t>(i)], out.elems[static_cast<size_t>(j)]));
      if (it == where.end()) throw std::logic_error("closure set not closed under product");
      table->mul_table[static_cast<size_t>(i)][static_cast<size_t>(j)] = it->second;
    }
  for (long long k = 0; k < table->p; ++k)
    for (int i = 0; i < n; ++i) {
      auto it = where.find(model.scale(model.f.element(k), out.elems[static_cast<size_t>(i)]));
      if (it == where.end()) throw std::logic_error("closure set not closed under scalars");
      table->act_table[static_cast<size_t>(k)][static_cast<size_t>(i)] = it->second;
    }
  out.S = table;
  return out;
}

/// From a representation to an action: the commutative semigroup S generated by the
/// alpha n_x, its ideals S_x = S n_x, the conjugation maps theta_x, the
/// inherited twisting, and the epimorphism psi onto Gamma(G).
template <class K, class M>
struct ThetaFromRep {
  ClosureSemigroup<M> S;
  SemigroupTPA t;
  AxiomReport report;  // action axioms + psi checks
};

template <class K, class M>
ThetaFromRep<K, M> theta_from_rep(const PartialRep<K, M>& rep, const PartialFactorSet<K>& sigma,
                                  size_t closure_cap = 20000) {
  static_assert(K::finite, "theta_from_rep needs a finite base field");
  Stopwatch clock;
  const Groupoid& G = rep.G;
  const M& model = rep.model;
  auto nx = compute_nx(rep, sigma);

  ThetaFromRep<K, M> out;
  std::vector<typename M::value_type> gens;
  for (int x = 0; x < G.size(); ++x)
    for (long long k = 1; k < model.f.size(); ++k)
      gens.push_back(model.scale(model.f.element(k), nx.n[static_cast<size_t>(x)]));
  out.S = closure_semigroup(model, std::move(gens), closure_cap);

  int n = static_cast<int>(out.S.elems.size());
  auto find = [&](const typename M::value_type& v) { return out.S.index_of(model, v); };

  out.t.G = G;
  out.t.S = out.S.S;
  out.t.sigma = sigma;
  out.t.member.assign(static_cast<size_t>(G.size()), std::vector<char>(static_cast<size_t>(n), 0));
  out.t.theta.assign(static_cast<size_t>(G.size()), std::vector<int>(static_cast<size_t>(n), -1));
  for (int x = 0; x < G.size(); ++x) {
    for (int s = 0; s < n; ++s) {
      int id = find(model.mul(out.S.elems[static_cast<size_t>(s)], nx.n[static_cast<size_t>(x)]));
      if (id < 0) throw std::logic_error("S n_x left the closure");
      out.t.member[static_cast<size_t>(x)][static_cast<size_t>(id)] = 1;
    }
  }
  for (int x = 0; x < G.size(); ++x) {
    int xi = G.inv(x);
    bool dead = model.is_zero(rep.gamma[static_cast<size_t>(xi)]);
    const auto& sg = sigma.at(xi, x);
    for (int s = 0; s < n; ++s) {
      if (!out.t.member[static_cast<size_t>(xi)][static_cast<size_t>(s)]) continue;
      if (dead || sg.is_zero()) {
        out.t.theta[static_cast<size_t>(x)][static_cast<size_t>(s)] = 0;
        continue;
      }
      auto v = model.scale(model.f.one() / sg,
                           model.mul(model.mul(rep.gamma[static_cast<size_t>(x)], out.S.elems[static_cast<size_t>(s)]),
                                     rep.gamma[static_cast<size_t>(xi)]));
      int id = find(v);
      if (id < 0) throw ArgumentError("theta_x image left the closure semigroup; input is not a partial representation");
      out.t.theta[static_cast<size_t>(x)][static_cast<size_t>(s)] = id;
    }
  }

  out.report = verify_semigroup_tpa(out.t);
  out.report.subject = "theta from representation";

  // psi : S x| G -> Gamma(G), a delta_x -> a Gamma(x)
  SemigroupCrossedProduct scp = build_semigroup_crossed_product(out.t);
  auto psi = [&](int id) {
    if (id == 0) return model.zero;
    auto [x, s] = scp.labels[static_cast<size_t>(id)];
    return model.mul(out.S.elems[static_cast<size_t>(s)], rep.gamma[static_cast<size_t>(x)]);
  };

  auto& hom = out.report.add("psi-homomorphism");
  int m = scp.S->size();
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      ++hom.checked;
      if (!model.equal(psi(scp.S->mul(i, j)), model.mul(psi(i), psi(j))))
        hom.fail({{scp.S->label(i), scp.S->label(j)}, "psi(PQ) != psi(P) psi(Q)"});
    }

  auto& surj = out.report.add("psi-surjective");
  {
    std::vector<typename M::value_type> ggens;
    for (int x = 0; x < G.size(); ++x)
      for (long long k = 1; k < model.f.size(); ++k)
        ggens.push_back(model.scale(model.f.element(k), rep.gamma[static_cast<size_t>(x)]));
    ClosureSemigroup<M> gamma_closure = closure_semigroup(model, std::move(ggens), closure_cap);
    std::set<int> image;
    for (int i = 0; i < m; ++i) image.insert(gamma_closure.index_of(model, psi(i)));
    ++surj.checked;
    if (image.count(-1) || image.size() != gamma_closure.elems.size())
      surj.fail({{}, "psi image differs from the Gamma(G)-generated subsemigroup"});
  }

  out.report.wall_ms = clock.ms();
  return out;
}

/// From an action to a representation: Gamma_theta(x) = 1_x delta_x inside the semigroup
/// crossed product, packaged as a PartialRep over the table model, with the
/// separating property verified.
struct RepFromTheta {
  SemigroupCrossedProduct scp;
  PartialRep<FpField, TableModel> rep;
  AxiomReport report;
};

inline RepFromTheta rep_from_theta(const SemigroupTPA& t) {
  Stopwatch clock;
  SemigroupCrossedProduct scp = build_semigroup_crossed_product(t);
  TableModel model(scp.S);
  RepFromTheta out{std::move(scp), PartialRep<FpField, TableModel>{std::move(model), t.G, {}}, {}};
  out.rep.gamma = out.scp.gamma_theta;
  const Groupoid& G = t.G;
  const TableModel& S = out.rep.model;
  auto Ga = [&](int x) { return out.rep.gamma[static_cast<size_t>(x)]; };

  auto& ident = out.report.add("gamma-one-sided-identities");
  for (int x = 0; x < G.size(); ++x) {
    ++ident.checked;
    if (S.mul(Ga(G.r(x)), Ga(x)) != Ga(x) || S.mul(Ga(x), Ga(G.d(x))) != Ga(x))
      ident.fail({{G.label(x)}, "Gamma_theta(r(x)) / Gamma_theta(d(x)) are not one-sided identities"});
  }

  auto& sep = out.report.add("separating");
  {
    // S' = closure of the alpha n_x, n_x = 1_x delta_{r(x)}
    std::vector<int> ngens;
    std::vector<int> n_of(static_cast<size_t>(G.size()), 0);
    for (int x = 0; x < G.size(); ++x) {
      int nx = S.mul(Ga(x), Ga(G.inv(x)));
      const auto& sg = t.sigma.at(G.inv(x), x);
      n_of[static_cast<size_t>(x)] = sg.is_zero() ? 0 : S.scale(S.f.one() / sg, nx);
      for (long long k = 1; k < S.f.p; ++k)
        ngens.push_back(S.scale(Mod(k, S.f.p), n_of[static_cast<size_t>(x)]));
    }
    ClosureSemigroup<TableModel> sprime = closure_semigroup(S, ngens);
    std::vector<std::set<int>> slices;
    for (int x = 0; x < G.size(); ++x) {
      std::set<int> slice;
      for (auto& e : sprime.elems) slice.insert(S.mul(S.mul(e, n_of[static_cast<size_t>(x)]), Ga(x)));
      slice.erase(0);
      slices.push_back(std::move(slice));
    }
    for (int x = 0; x < G.size(); ++x)
      for (int y = x + 1; y < G.size(); ++y) {
        ++sep.checked;
        for (int v : slices[static_cast<size_t>(x)])
          if (slices[static_cast<size_t>(y)].count(v))
            sep.fail({{G.label(x), G.label(y)}, "S'_x Gamma(x) meets S'_y Gamma(y) away from 0"});
      }
  }

  out.report.subject = "representation from theta";
  out.report.wall_ms = clock.ms();
  return out;
}

/// Round trip, representation side: psi(Gamma_{theta^Gamma}(x)) = Gamma(x).
template <class K, class M>
AxiomReport roundtrip_from_rep(const PartialRep<K, M>& rep, const PartialFactorSet<K>& sigma) {
  Stopwatch clock;
  AxiomReport out;
  out.subject = "round trip from representation";
  ThetaFromRep<K, M> tf = theta_from_rep(rep, sigma);
  RepFromTheta rf = rep_from_theta(tf.t);

  auto& rec = out.add("psi-recovers-gamma");
  for (int x = 0; x < rep.G.size(); ++x) {
    ++rec.checked;
    int id = rf.rep.gamma[static_cast<size_t>(x)];
    typename M::value_type val = rep.model.zero;
    if (id != 0) {
      auto [arrow, s] = rf.scp.labels[static_cast<size_t>(id)];
      if (arrow != x) {
        rec.fail({{rep.G.label(x)}, "Gamma_theta(x) is not supported at delta_x"});
        continue;
      }
      val = rep.model.mul(tf.S.elems[static_cast<size_t>(s)], rep.gamma[static_cast<size_t>(x)]);
    }
    if (!rep.model.equal(val, rep.gamma[static_cast<size_t>(x)]))
      rec.fail({{rep.G.label(x)}, "psi(Gamma_{theta^Gamma}(x)) != Gamma(x)"});
  }

  auto& sub = out.add("construction-reports");
  sub.checked = 1;
  if (!tf.report.passed() || !rf.report.passed()) sub.fail({{}, "an intermediate construction report failed"});

  out.wall_ms = clock.ms();
  return out;
}

/// Round trip, action side: theta^{Gamma_theta} is isomorphic to the adjusted
/// part of theta via the coordinate map phi.
inline AxiomReport roundtrip_from_theta(const SemigroupTPA& t) {
  Stopwatch clock;
  AxiomReport out;
  out.subject = "round trip from action";
  const Groupoid& G = t.G;
  const KSemigroup& T = *t.S;

  RepFromTheta rf = rep_from_theta(t);
  auto [vrep, sigma_hat] = verify_partial_rep(rf.rep);
  auto& valid = out.add("gamma-theta-is-partial-rep");
  valid.checked = 1;
  if (!vrep.passed()) valid.fail({{}, "verify_partial_rep failed on Gamma_theta"});

  auto& sgrec = out.add("sigma-recovered");
  sgrec.checked = 1;
  if (!(sigma_hat == t.sigma)) sgrec.fail({{}, "extracted factor set differs from the input twisting"});

  // n_x computed in the crossed product equals 1_x delta_{r(x)}
  auto& ndelta = out.add("n-equals-unit-delta");
  const TableModel& S = rf.rep.model;
  std::vector<int> n_of(static_cast<size_t>(G.size()), 0);
  for (int x = 0; x < G.size(); ++x) {
    ++ndelta.checked;
    int eta = S.mul(rf.rep.gamma[static_cast<size_t>(x)], rf.rep.gamma[static_cast<size_t>(G.inv(x))]);
    const auto& sg = sigma_hat.at(G.inv(x), x);
    int nx = sg.is_zero() ? 0 : S.scale(S.f.one() / sg, eta);
    n_of[static_cast<size_t>(x)] = nx;
    int unit = t.unit_of(x);
    int expected = (unit < 0 || unit == T.zero) ? 0 : rf.scp.id_of(G.r(x), unit);
    if (nx != expected) ndelta.fail({{G.label(x)}, "n_x != 1_x delta_{r(x)}"});
  }

  // theta^{Gamma_theta} on S inside the crossed product
  ThetaFromRep<FpField, TableModel> tf = theta_from_rep(rf.rep, sigma_hat);
  auto& sub = out.add("construction-reports");
  sub.checked = 1;
  if (!tf.report.passed() || !rf.report.passed()) sub.fail({{}, "an intermediate construction report failed"});

  // phi : S -> T drops the delta marker at the identity coordinate
  auto& supp = out.add("phi-supported-at-identities");
  std::vector<int> phi(tf.S.elems.size(), T.zero);
  for (size_t i = 1; i < tf.S.elems.size(); ++i) {
    ++supp.checked;
    int id = tf.S.elems[i];
    auto [arrow, a] = rf.scp.labels[static_cast<size_t>(id)];
    if (!G.is_identity(arrow)) {
      supp.fail({{G.label(arrow)}, "an element of S lives over a non-identity arrow"});
      continue;
    }
    phi[i] = a;
  }

  auto& inj = out.add("phi-injective");
  inj.checked = 1;
  {
    std::set<int> seen;
    for (size_t i = 0; i < phi.size(); ++i)
      if (!seen.insert(phi[i]).second && !(phi[i] == T.zero && tf.S.elems[i] == 0))
        inj.fail({{}, "phi collides"});
  }

  auto& mult = out.add("phi-multiplicative");
  for (size_t i = 0; i < tf.S.elems.size(); ++i)
    for (size_t j = 0; j < tf.S.elems.size(); ++j) {
      ++mult.checked;
      int prod = S.mul(tf.S.elems[i], tf.S.elems[j]);
      int pidx = tf.S.index_of(S, prod);
      if (pidx < 0 || phi[static_cast<size_t>(pidx)] != T.mul(phi[i], phi[j])) {
        mult.fail({{}, "phi(st) != phi(s) phi(t)"});
        goto mult_done;
      }
    }
mult_done:;

  auto& inter = out.add("phi-intertwines-theta");
  for (int x = 0; x < G.size(); ++x) {
    int xi = G.inv(x);
    for (size_t i = 0; i < tf.S.elems.size(); ++i) {
      int local = static_cast<int>(i);
      if (!tf.t.member[static_cast<size_t>(xi)][static_cast<size_t>(local)]) continue;
      ++inter.checked;
      int mapped = tf.t.apply(x, local);
      int lhs = phi[static_cast<size_t>(mapped)];
      int rhs = t.apply(x, phi[i]);
      if (rhs < 0 || lhs != rhs) inter.fail({{G.label(x)}, "phi(theta^G_x(a)) != theta_x(phi(a))"});
    }
  }

  // image = the adjusted part T-bar generated by the alpha 1_x
  auto& adj = out.add("phi-image-is-adjusted-part");
  {
    TableModel tm(t.S);
    std::vector<int> gens;
    for (int x = 0; x < G.size(); ++x) {
      int u = t.unit_of(x);
      for (long long k = 1; k < T.p; ++k) gens.push_back(T.act(k, u < 0 ? T.zero : u));
    }
    ClosureSemigroup<TableModel> tbar = closure_semigroup(tm, gens);
    std::set<int> image(phi.begin(), phi.end());
    std::set<int> expected(tbar.elems.begin(), tbar.elems.end());
    ++adj.checked;
    if (image != expected) adj.fail({{}, "phi image differs from the 1_x-generated subsemigroup"});
    auto& iso = out.add("iso-onto-T-iff-adjusted");
    iso.checked = 1;
    bool adjusted = static_cast<int>(tbar.elems.size()) == T.size();
    bool onto = static_cast<int>(image.size()) == T.size();
    if (adjusted != onto) iso.fail({{}, "phi is onto T exactly when theta is adjusted; mismatch"});
  }

  out.wall_ms = clock.ms();
  return out;
}

}  // namespace partact
