#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "partact/exel.hpp"
#include "partact/matrix.hpp"

namespace partact {

// Partial maps into K are stored total with 0 meaning "zero or undefined",
// so the maps stay total; all the verifiers below work with that
// encoding directly.

/// Factor set over a finite semigroupoid carrier.
template <class K>
struct FactorSet {
  K f;
  Semigroupoid carrier;
  std::vector<typename K::Elem> v;  // dense size() x size()

  FactorSet() = default;
  FactorSet(K field, Semigroupoid c)
      : f(field), carrier(std::move(c)),
        v(static_cast<size_t>(carrier.size()) * carrier.size(), field.zero()) {}

  int size() const { return carrier.size(); }
  bool exists(int x, int y) const { return carrier.composable(x, y); }
  int prod(int x, int y) const { return carrier.mul(x, y); }
  int r_of(int x) const { return carrier.r(x); }
  int d_of(int x) const { return carrier.d(x); }
  const std::string& label(int x) const { return carrier.label(x); }
  typename K::Elem& at(int x, int y) { return v[static_cast<size_t>(x) * size() + y]; }
  const typename K::Elem& at(int x, int y) const { return v[static_cast<size_t>(x) * size() + y]; }

  bool same_carrier(const FactorSet& o) const { return carrier == o.carrier; }
  friend bool operator==(const FactorSet& a, const FactorSet& b) { return a.v == b.v && a.same_carrier(b); }
  friend bool operator<(const FactorSet& a, const FactorSet& b) { return a.v < b.v; }
};

/// Factor set of a groupoid partial projective representation; the carrier
/// keeps its groupoid structure for the inverse-aware conditions.
template <class K>
struct PartialFactorSet {
  K f;
  Groupoid G;
  std::vector<typename K::Elem> v;

  PartialFactorSet() = default;
  PartialFactorSet(K field, Groupoid g)
      : f(field), G(std::move(g)), v(static_cast<size_t>(G.size()) * G.size(), field.zero()) {}

  int size() const { return G.size(); }
  bool exists(int x, int y) const { return G.composable(x, y); }
  int prod(int x, int y) const { return G.compose(x, y); }
  int r_of(int x) const { return G.r(x); }
  int d_of(int x) const { return G.d(x); }
  const std::string& label(int x) const { return G.label(x); }
  typename K::Elem& at(int x, int y) { return v[static_cast<size_t>(x) * size() + y]; }
  const typename K::Elem& at(int x, int y) const { return v[static_cast<size_t>(x) * size() + y]; }

  bool same_carrier(const PartialFactorSet& o) const { return G == o.G; }
  friend bool operator==(const PartialFactorSet& a, const PartialFactorSet& b) {
    return a.v == b.v && a.same_carrier(b);
  }
  friend bool operator<(const PartialFactorSet& a, const PartialFactorSet& b) { return a.v < b.v; }
};

/// Conditions (3) and (4) for a factor set of a projective representation
/// of a category, plus the structural zero-off-composable convention.
template <class K>
AxiomReport verify_category_factor_set(const FactorSet<K>& rho) {
  Stopwatch clock;
  if (!rho.carrier.category) throw ArgumentError("factor-set verification needs a category carrier");
  AxiomReport rep;
  rep.subject = "category factor set";
  auto L = [&](int i) { return rho.label(i); };

  auto& zero_off = rep.add("zero-off-composable");
  for (int x = 0; x < rho.size(); ++x)
    for (int y = 0; y < rho.size(); ++y) {
      if (rho.exists(x, y)) continue;
      ++zero_off.checked;
      if (!rho.at(x, y).is_zero()) zero_off.fail({{L(x), L(y)}, "rho nonzero on a non-composable pair"});
    }

  auto& cocycle = rep.add("2-cocycle");
  for (auto& t : rho.carrier.composable_triples()) {
    ++cocycle.checked;
    int x = t[0], y = t[1], z = t[2];
    auto lhs = rho.at(x, y) * rho.at(rho.prod(x, y), z);
    auto rhs = rho.at(x, rho.prod(y, z)) * rho.at(y, z);
    if (lhs != rhs)
      cocycle.fail({{L(x), L(y), L(z)}, rho.f.display(lhs) + " != " + rho.f.display(rhs)});
  }

  auto& vanish = rep.add("vanishing-chain");
  for (auto [x, y] : rho.carrier.composable_pairs()) {
    ++vanish.checked;
    bool a = rho.at(x, y).is_zero();
    bool b = rho.at(rho.r_of(x), rho.prod(x, y)).is_zero();
    if (a != b) vanish.fail({{L(x), L(y)}, "rho(x,y) = 0 not equivalent to rho(r(x),xy) = 0"});
  }

  rep.wall_ms = clock.ms();
  return rep;
}

/// The |C| x |C| row-monomial matrices realizing a verified category factor
/// set: gamma_{u,v}(x) = rho(u,x) when u x = v.
template <class K>
struct MonomialRep {
  K f;
  Semigroupoid carrier;
  std::vector<Mat<K>> gamma;  // per element
};

template <class K>
MonomialRep<K> monomial_representation(const FactorSet<K>& rho) {
  {
    AxiomReport chk = verify_category_factor_set(rho);
    if (!chk.passed()) throw ArgumentError("monomial representation refused: rho is not a factor set");
  }
  MonomialRep<K> rep{rho.f, rho.carrier, {}};
  int m = rho.size();
  for (int x = 0; x < m; ++x) {
    Mat<K> gx(rho.f, m, m);
    for (int u = 0; u < m; ++u)
      if (rho.exists(u, x)) gx.at(u, rho.prod(u, x)) = rho.at(u, x);
    rep.gamma.push_back(std::move(gx));
  }
  return rep;
}

/// Exhaustive check of Gamma(x)Gamma(y) = Gamma(xy) rho(x,y) with the zero
/// conventions.
template <class K>
AxiomReport verify_monomial(const MonomialRep<K>& rep, const FactorSet<K>& rho) {
  Stopwatch clock;
  AxiomReport out;
  out.subject = "monomial representation";
  auto& rel = out.add("defining-relation");
  int m = rho.size();
  for (int x = 0; x < m; ++x)
    for (int y = 0; y < m; ++y) {
      ++rel.checked;
      Mat<K> lhs = rep.gamma[static_cast<size_t>(x)] * rep.gamma[static_cast<size_t>(y)];
      if (!rho.exists(x, y)) {
        if (!lhs.is_zero()) rel.fail({{rho.label(x), rho.label(y)}, "Gamma(x)Gamma(y) != 0 for non-composable pair"});
        continue;
      }
      Mat<K> rhs = rep.gamma[static_cast<size_t>(rho.prod(x, y))];
      for (auto& e : rhs.a) e *= rho.at(x, y);
      if (lhs != rhs) rel.fail({{rho.label(x), rho.label(y)}, "Gamma(x)Gamma(y) != Gamma(xy) rho(x,y)"});
    }
  out.wall_ms = clock.ms();
  return out;
}

/// Model of a K-cancellative semigroup by square matrices over K.
template <class K>
struct MatModel {
  using value_type = Mat<K>;
  K f;
  value_type zero;

  MatModel(K field, int n) : f(field), zero(field, n, n) {}

  value_type mul(const value_type& a, const value_type& b) const { return a * b; }
  value_type scale(const typename K::Elem& c, const value_type& a) const {
    value_type out = a;
    for (auto& e : out.a) e *= c;
    return out;
  }
  bool is_zero(const value_type& a) const { return a.is_zero(); }
  bool equal(const value_type& a, const value_type& b) const { return a == b; }
  bool less(const value_type& a, const value_type& b) const { return a.a < b.a; }
  std::string show(const value_type& a) const {
    std::string out = "[";
    for (int r = 0; r < a.rows; ++r) {
      if (r) out += "; ";
      for (int c = 0; c < a.cols; ++c) {
        if (c) out += " ";
        out += f.print(a.at(r, c));
      }
    }
    return out + "]";
  }

  /// All s in K* with a = s b (for matrices, at most one).
  std::vector<typename K::Elem> ratios(const value_type& a, const value_type& b) const {
    for (size_t i = 0; i < b.a.size(); ++i) {
      if (b.a[i].is_zero()) continue;
      auto s = a.a[i] / b.a[i];
      if (s.is_zero()) return {};
      if (equal(a, scale(s, b))) return {s};
      return {};
    }
    return {};
  }
};

/// A groupoid map into a semigroup model, candidate partial projective
/// representation.
template <class K, class M>
struct PartialRep {
  M model;
  Groupoid G;
  std::vector<typename M::value_type> gamma;  // per arrow
};

/// Theorem-level characterization of groupoid partial projective
/// representations: the simultaneous-vanishing condition, the unique
/// extracted factor set satisfying both displayed identities, the
/// conditional 2-cocycle and sigma(x,x^-1) = sigma(x^-1,x).
template <class K, class M>
std::pair<AxiomReport, PartialFactorSet<K>> verify_partial_rep(const PartialRep<K, M>& rep) {
  Stopwatch clock;
  require_valid(rep.G);
  if (static_cast<int>(rep.gamma.size()) != rep.G.size())
    throw SchemaError("partial representation must cover every arrow");
  AxiomReport out;
  out.subject = "partial projective representation";
  const Groupoid& G = rep.G;
  const M& S = rep.model;
  auto L = [&](int i) { return G.label(i); };
  auto Ga = [&](int x) -> const typename M::value_type& { return rep.gamma[static_cast<size_t>(x)]; };

  PartialFactorSet<K> sigma(S.f, G);

  auto& vanish = out.add("simultaneous-vanishing");
  for (int x = 0; x < G.size(); ++x)
    for (int y = 0; y < G.size(); ++y) {
      ++vanish.checked;
      auto xy_prod = S.mul(Ga(x), Ga(y));
      if (!G.composable(x, y)) {
        if (!S.is_zero(xy_prod)) vanish.fail({{L(x), L(y)}, "Gamma(x)Gamma(y) != 0 for non-composable pair"});
        continue;
      }
      int xy = G.compose(x, y);
      bool z2 = S.is_zero(xy_prod);
      bool z1 = S.is_zero(S.mul(Ga(G.inv(x)), Ga(xy)));
      bool z3 = S.is_zero(S.mul(Ga(xy), Ga(G.inv(y))));
      if (z1 != z2 || z2 != z3)
        vanish.fail({{L(x), L(y)}, "the three products do not vanish simultaneously"});
    }

  auto& extract = out.add("sigma-extraction");
  for (auto [x, y] : G.composable_pairs()) {
    auto prod_xy = S.mul(Ga(x), Ga(y));
    if (S.is_zero(prod_xy)) continue;  // off dom sigma; stays 0
    ++extract.checked;
    int xy = G.compose(x, y), xi = G.inv(x), yi = G.inv(y);
    auto lhs1 = S.mul(Ga(xi), prod_xy);
    auto base1 = S.mul(Ga(xi), Ga(xy));
    if (S.is_zero(base1)) {
      extract.fail({{L(x), L(y)}, "Gamma(x^-1)Gamma(xy) = 0 while Gamma(x)Gamma(y) != 0"});
      continue;
    }
    auto candidates = S.ratios(lhs1, base1);
    if (candidates.size() != 1) {
      extract.fail({{L(x), L(y)},
                    candidates.empty() ? "no scalar relates the two sides"
                                       : "scalar not unique (target not K-cancellative)"});
      continue;
    }
    auto s = candidates[0];
    auto lhs2 = S.mul(prod_xy, Ga(yi));
    auto rhs2 = S.scale(s, S.mul(Ga(xy), Ga(yi)));
    if (!S.equal(lhs2, rhs2)) {
      extract.fail({{L(x), L(y)}, "the two displayed identities need different scalars"});
      continue;
    }
    sigma.at(x, y) = s;
  }

  auto& cocycle = out.add("conditional-2-cocycle");
  for (auto& t : composable_tuples(G, 3)) {
    int x = t[0], y = t[1], z = t[2];
    if (S.is_zero(S.mul(S.mul(Ga(x), Ga(y)), Ga(z)))) continue;
    ++cocycle.checked;
    auto lhs = sigma.at(x, y) * sigma.at(G.compose(x, y), z);
    auto rhs = sigma.at(x, G.compose(y, z)) * sigma.at(y, z);
    if (lhs != rhs) cocycle.fail({{L(x), L(y), L(z)}, S.f.display(lhs) + " != " + S.f.display(rhs)});
  }

  auto& symm = out.add("sigma-inverse-symmetry");
  for (int x = 0; x < G.size(); ++x) {
    ++symm.checked;
    if (sigma.at(x, G.inv(x)) != sigma.at(G.inv(x), x))
      symm.fail({{L(x)}, "sigma(x,x^-1) != sigma(x^-1,x)"});
  }

  out.wall_ms = clock.ms();
  return {out, sigma};
}

/// Domain-closure properties of a partial factor set: the six-pair chain on
/// composable pairs and the four-way identity-pair chain.
template <class K>
AxiomReport check_domain_closure(const PartialFactorSet<K>& s) {
  Stopwatch clock;
  AxiomReport rep;
  rep.subject = "factor-set domain";
  const Groupoid& G = s.G;
  auto L = [&](int i) { return G.label(i); };
  auto inD = [&](int x, int y) { return !s.at(x, y).is_zero(); };

  auto& zero_off = rep.add("zero-off-composable");
  for (int x = 0; x < G.size(); ++x)
    for (int y = 0; y < G.size(); ++y) {
      if (G.composable(x, y)) continue;
      ++zero_off.checked;
      if (inD(x, y)) zero_off.fail({{L(x), L(y)}, "sigma nonzero on a non-composable pair"});
    }

  auto& chain = rep.add("six-pair-chain");
  for (auto [x, y] : G.composable_pairs()) {
    ++chain.checked;
    int xy = G.compose(x, y), xi = G.inv(x), yi = G.inv(y);
    bool v = inD(x, y);
    bool all_same = inD(xi, xy) == v && inD(xy, yi) == v && inD(y, G.compose(yi, xi)) == v &&
                    inD(yi, xi) == v && inD(G.compose(yi, xi), x) == v;
    if (!all_same) chain.fail({{L(x), L(y)}, "six-pair equivalence broken"});
  }

  auto& idchain = rep.add("identity-pair-chain");
  for (int x = 0; x < G.size(); ++x) {
    ++idchain.checked;
    int xi = G.inv(x);
    bool v = inD(x, G.d(x));
    if (inD(xi, x) != v || inD(G.d(x), xi) != v || inD(G.r(x), x) != v)
      idchain.fail({{L(x)}, "identity-pair equivalence broken"});
  }

  rep.wall_ms = clock.ms();
  return rep;
}

// ---- idempotents and the ideal correspondence ----------------------------

template <class FS>
FS factor_set_product(const FS& a, const FS& b) {
  if (!a.same_carrier(b)) throw ArgumentError("factor-set product needs matching carriers");
  FS out = a;
  for (size_t i = 0; i < out.v.size(); ++i) out.v[i] = a.v[i] * b.v[i];
  return out;
}

template <class FS>
bool is_idempotent(const FS& a) {
  for (auto& x : a.v)
    if (x * x != x) return false;
  return true;
}

/// I_eps = { y : eps(r(y), y) = 0 }, checked to be an ideal of the carrier.
template <class FS>
std::vector<int> ideal_of_idempotent(const FS& eps) {
  if (!is_idempotent(eps)) throw ArgumentError("ideal_of_idempotent needs an idempotent factor set");
  std::vector<int> ideal;
  std::vector<bool> in(static_cast<size_t>(eps.size()), false);
  for (int y = 0; y < eps.size(); ++y)
    if (eps.at(eps.r_of(y), y).is_zero()) {
      ideal.push_back(y);
      in[static_cast<size_t>(y)] = true;
    }
  for (int y : ideal)
    for (int x = 0; x < eps.size(); ++x) {
      if (eps.exists(x, y) && !in[static_cast<size_t>(eps.prod(x, y))])
        throw ArgumentError("zero set of the idempotent is not an ideal");
      if (eps.exists(y, x) && !in[static_cast<size_t>(eps.prod(y, x))])
        throw ArgumentError("zero set of the idempotent is not an ideal");
    }
  return ideal;
}

template <class FS, class Carrier, class K>
FS idempotent_of_ideal_impl(K f, const Carrier& c, const std::vector<int>& ideal) {
  FS out(f, c);
  std::vector<bool> in(static_cast<size_t>(out.size()), false);
  for (int x : ideal) in[static_cast<size_t>(x)] = true;
  for (int x = 0; x < out.size(); ++x)
    for (int y = 0; y < out.size(); ++y)
      if (out.exists(x, y) && !in[static_cast<size_t>(out.prod(x, y))]) out.at(x, y) = f.one();
  return out;
}

template <class K>
FactorSet<K> idempotent_of_ideal(K f, const Semigroupoid& c, const std::vector<int>& ideal) {
  return idempotent_of_ideal_impl<FactorSet<K>>(f, c, ideal);
}

template <class K>
PartialFactorSet<K> idempotent_of_ideal(K f, const Groupoid& g, const std::vector<int>& ideal) {
  return idempotent_of_ideal_impl<PartialFactorSet<K>>(f, g, ideal);
}

/// Idempotency criterion for a partial factor set with sigma(e,e) = 1:
/// values 0/1 and the domain closure (12).
template <class K>
AxiomReport verify_idempotent_criterion(const PartialFactorSet<K>& s) {
  Stopwatch clock;
  AxiomReport rep;
  rep.subject = "idempotent criterion";
  const Groupoid& G = s.G;
  auto L = [&](int i) { return G.label(i); };

  auto& normalized = rep.add("identity-normalization");
  for (int e : G.identities()) {
    ++normalized.checked;
    if (!s.at(e, e).is_one()) normalized.fail({{L(e)}, "sigma(e,e) != 1"});
  }

  auto& zero_one = rep.add("zero-one-valued");
  for (int x = 0; x < G.size(); ++x)
    for (int y = 0; y < G.size(); ++y) {
      ++zero_one.checked;
      const auto& val = s.at(x, y);
      if (!val.is_zero() && !val.is_one()) zero_one.fail({{L(x), L(y)}, "value outside {0,1}"});
    }

  auto& closure12 = rep.add("domain-closure-12");
  for (auto [x, y] : G.composable_pairs()) {
    if (s.at(x, y).is_zero()) continue;
    ++closure12.checked;
    int xy = G.compose(x, y), xi = G.inv(x), yi = G.inv(y);
    if (s.at(xy, yi).is_zero() || s.at(yi, xi).is_zero() || s.at(x, G.d(x)).is_zero())
      closure12.fail({{L(x), L(y)}, "(xy,y^-1),(y^-1,x^-1),(x,d(x)) not all in dom sigma"});
  }

  rep.wall_ms = clock.ms();
  return rep;
}

// ---- multiplicative constraint systems over K* ---------------------------

namespace detail_mulsolve {

/// Equations c_l * prod(lhs vars) = c_r * prod(rhs vars) with all variables
/// ranging over K*.  Plain DFS with unit propagation; exhaustive, no group
/// theory.
template <class K>
struct MulSolver {
  using Elem = typename K::Elem;
  struct Eq {
    std::vector<int> lhs, rhs;
    Elem cl, cr;
  };

  K f;
  int nvars = 0;
  std::vector<Eq> eqs;
  long long node_budget = 4'000'000;
  long long nodes = 0;

  explicit MulSolver(K field) : f(field) {}

  bool propagate(std::vector<std::optional<Elem>>& a) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (auto& eq : eqs) {
        Elem lv = eq.cl, rv = eq.cr;
        int unknown = -1, side = 0, unknown_count = 0;
        for (int vi : eq.lhs) {
          if (a[static_cast<size_t>(vi)])
            lv *= *a[static_cast<size_t>(vi)];
          else {
            ++unknown_count;
            unknown = vi;
            side = 0;
          }
        }
        for (int vi : eq.rhs) {
          if (a[static_cast<size_t>(vi)])
            rv *= *a[static_cast<size_t>(vi)];
          else {
            ++unknown_count;
            unknown = vi;
            side = 1;
          }
        }
        if (unknown_count == 0) {
          if (lv != rv) return false;
        } else if (unknown_count == 1) {
          Elem forced = side == 0 ? rv / lv : lv / rv;
          if (forced.is_zero()) return false;
          a[static_cast<size_t>(unknown)] = forced;
          changed = true;
        }
      }
    }
    return true;
  }

  /// Enumerate every solution; returns false if a budget tripped.
  bool solve_all(const std::function<void(const std::vector<Elem>&)>& emit) {
    std::vector<std::optional<Elem>> a(static_cast<size_t>(nvars));
    return dfs(a, emit);
  }

  bool dfs(std::vector<std::optional<Elem>> a, const std::function<void(const std::vector<Elem>&)>& emit) {
    if (++nodes > node_budget) throw CapacityError("multiplicative solver budget exceeded");
    if (!propagate(a)) return true;
    int pick = -1;
    for (int i = 0; i < nvars; ++i)
      if (!a[static_cast<size_t>(i)]) {
        pick = i;
        break;
      }
    if (pick < 0) {
      std::vector<Elem> full;
      full.reserve(static_cast<size_t>(nvars));
      for (auto& x : a) full.push_back(*x);
      emit(full);
      return true;
    }
    for (long long val = 1; val < f.size(); ++val) {
      auto b = a;
      b[static_cast<size_t>(pick)] = f.element(val);
      dfs(std::move(b), emit);
    }
    return true;
  }
};

}  // namespace detail_mulsolve

/// Search for a twisting nu with a(x,y) = nu(x) nu(xy)^-1 nu(y) b(x,y) on
/// every composable pair; requires identical zero sets.  Exhaustive over
/// (K*)^carrier with unit propagation; finite K only.
template <class FS, class K = decltype(FS::f)>
std::optional<std::vector<typename K::Elem>> equivalent_factor_sets(const FS& a, const FS& b) {
  using Elem = typename K::Elem;
  if (!a.same_carrier(b)) throw ArgumentError("equivalence needs matching carriers");
  if constexpr (!K::finite) {
    throw ArgumentError("factor-set equivalence search needs a finite field");
  } else {
    for (size_t i = 0; i < a.v.size(); ++i)
      if (a.v[i].is_zero() != b.v[i].is_zero()) return std::nullopt;

    detail_mulsolve::MulSolver<K> solver(a.f);
    solver.nvars = a.size();
    for (int x = 0; x < a.size(); ++x)
      for (int y = 0; y < a.size(); ++y) {
        if (!a.exists(x, y) || a.at(x, y).is_zero()) continue;
        // nu(x) nu(y) b = nu(xy) a
        typename detail_mulsolve::MulSolver<K>::Eq eq;
        eq.lhs = {x, y};
        eq.rhs = {a.prod(x, y)};
        eq.cl = b.at(x, y);
        eq.cr = a.at(x, y);
        solver.eqs.push_back(std::move(eq));
      }

    std::optional<std::vector<Elem>> found;
    try {
      solver.solve_all([&](const std::vector<Elem>& nu) {
        if (!found) found = nu;
      });
    } catch (const CapacityError&) {
      if (!found) throw;
    }
    return found;
  }
}

/// All factor sets of a finite category over a finite field: one cocycle
/// system per ideal-shaped zero set, solved exhaustively.
template <class K>
std::vector<FactorSet<K>> enumerate_category_factor_sets(K f, const Semigroupoid& s,
                                                         size_t solution_cap = 500000) {
  if (!s.category) throw ArgumentError("factor-set enumeration needs a category carrier");
  static_assert(K::finite, "factor-set enumeration needs a finite field");
  std::vector<FactorSet<K>> out;
  auto pairs = s.composable_pairs();
  auto triples = s.composable_triples();

  for (auto& ideal : semigroupoid_ideals(s)) {
    std::vector<bool> dead(static_cast<size_t>(s.size()), false);
    for (int x : ideal) dead[static_cast<size_t>(x)] = true;

    // live variables: composable pairs whose product survives the ideal
    std::map<std::pair<int, int>, int> var;
    for (auto [x, y] : pairs)
      if (!dead[static_cast<size_t>(s.mul(x, y))]) var.emplace(std::make_pair(x, y), static_cast<int>(var.size()));

    detail_mulsolve::MulSolver<K> solver(f);
    solver.nvars = static_cast<int>(var.size());
    for (auto& t : triples) {
      int x = t[0], y = t[1], z = t[2];
      int xy = s.mul(x, y), yz = s.mul(y, z);
      if (dead[static_cast<size_t>(s.mul(xy, z))]) continue;
      typename detail_mulsolve::MulSolver<K>::Eq eq;
      eq.lhs = {var.at({x, y}), var.at({xy, z})};
      eq.rhs = {var.at({x, yz}), var.at({y, z})};
      eq.cl = f.one();
      eq.cr = f.one();
      solver.eqs.push_back(std::move(eq));
    }

    solver.solve_all([&](const std::vector<typename K::Elem>& sol) {
      if (out.size() >= solution_cap) throw CapacityError("factor-set enumeration over capacity");
      FactorSet<K> rho(f, s);
      for (auto& [pr, vi] : var) rho.at(pr.first, pr.second) = sol[static_cast<size_t>(vi)];
      out.push_back(std::move(rho));
    });
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// The ideal of E(G) the idempotent-criterion proof attaches to a 0/1
/// partial factor set: the two-sided ideal generated by the products [x][y]
/// with sigma(x,y) = 0.
template <class K>
std::vector<int> exel_ideal_of_partial_idempotent(const ExelCategory& cat, const PartialFactorSet<K>& s) {
  if (!(s.G == cat.G)) throw ArgumentError("factor set does not live on this Exel category's groupoid");
  std::set<int> ideal;
  for (auto [x, y] : cat.G.composable_pairs()) {
    if (!s.at(x, y).is_zero()) continue;
    int prod = cat.S.mul(cat.gen[static_cast<size_t>(x)], cat.gen[static_cast<size_t>(y)]);
    auto pi = principal_ideal(cat.S, prod);
    ideal.insert(pi.begin(), pi.end());
  }
  return std::vector<int>(ideal.begin(), ideal.end());
}

/// sigma(x,y) = rho([x],[y]) rho([x^-1],[x][y]) / rho([x^-1],[xy]) — the
/// one-directional lift from a factor set of E(G) down to the groupoid.
template <class K>
PartialFactorSet<K> project_exel_factor_set(const ExelCategory& cat, const FactorSet<K>& rho) {
  if (!(rho.carrier == cat.S)) throw ArgumentError("rho does not live on this Exel category");
  PartialFactorSet<K> sigma(rho.f, cat.G);
  const Groupoid& G = cat.G;
  for (auto [x, y] : G.composable_pairs()) {
    int gx = cat.gen[static_cast<size_t>(x)], gy = cat.gen[static_cast<size_t>(y)];
    if (rho.at(gx, gy).is_zero()) continue;
    int gxi = cat.gen[static_cast<size_t>(G.inv(x))];
    int gxy = cat.gen[static_cast<size_t>(G.compose(x, y))];
    int prod_xy = cat.S.mul(gx, gy);
    const auto& denom = rho.at(gxi, gxy);
    if (denom.is_zero()) throw std::logic_error("Exel lift divisor vanished where the numerator did not");
    sigma.at(x, y) = rho.at(gx, gy) * rho.at(gxi, prod_xy) / denom;
  }
  return sigma;
}

/// Brute-force pm(G) over a small prime field: enumerate the factor sets of
/// E(G), project each along the generators, dedupe, and organize the result
/// as the semilattice-of-components picture.
template <class K>
struct PmEnumeration {
  Groupoid G;
  K f;
  std::vector<PartialFactorSet<K>> sigmas;  // deduped, sorted

  struct Component {
    std::vector<int> members;            // indices into sigmas
    int idempotent = -1;                 // index into sigmas
    std::vector<int> ideal;              // the matching groupoid ideal
    std::vector<std::vector<int>> classes;  // pM classes (member indices)
  };
  std::vector<Component> components;
  AxiomReport report;
};

template <class K>
PmEnumeration<K> enumerate_pm(K f, const Groupoid& g, int max_arrows = 4, long long max_field = 5) {
  Stopwatch clock;
  if (g.size() > max_arrows) throw CapacityError("pm enumeration capped at " + std::to_string(max_arrows) + " arrows");
  if (f.size() > max_field) throw CapacityError("pm enumeration capped at field size " + std::to_string(max_field));

  PmEnumeration<K> pm;
  pm.G = g;
  pm.f = f;
  ExelCategory cat = build_exel_category(g);
  std::vector<FactorSet<K>> rhos = enumerate_category_factor_sets(f, cat.S);

  std::set<PartialFactorSet<K>> seen;
  for (auto& rho : rhos) seen.insert(project_exel_factor_set(cat, rho));
  pm.sigmas.assign(seen.begin(), seen.end());

  // components = grouping by zero set
  std::map<std::vector<bool>, std::vector<int>> by_zeroset;
  for (size_t i = 0; i < pm.sigmas.size(); ++i) {
    std::vector<bool> zs;
    for (auto& x : pm.sigmas[i].v) zs.push_back(x.is_zero());
    by_zeroset[zs].push_back(static_cast<int>(i));
  }

  auto& idem_unique = pm.report.add("one-idempotent-per-component");
  for (auto& [zs, members] : by_zeroset) {
    typename PmEnumeration<K>::Component comp;
    comp.members = members;
    for (int i : members)
      if (is_idempotent(pm.sigmas[static_cast<size_t>(i)])) {
        if (comp.idempotent >= 0) idem_unique.fail({{}, "two idempotents share a zero set"});
        comp.idempotent = i;
      }
    ++idem_unique.checked;
    if (comp.idempotent < 0)
      idem_unique.fail({{}, "component without idempotent"});
    else
      comp.ideal = exel_ideal_of_partial_idempotent(cat, pm.sigmas[static_cast<size_t>(comp.idempotent)]);
    pm.components.push_back(std::move(comp));
  }

  // pM classes inside each component via canonical forms under nu-twists
  long long twist_count = 1;
  for (int i = 0; i < g.size(); ++i) {
    twist_count *= (f.size() - 1);
    if (twist_count > 100000) throw CapacityError("too many twists for pM class canonicalization");
  }
  auto twist = [&](const PartialFactorSet<K>& s, const std::vector<typename K::Elem>& nu) {
    PartialFactorSet<K> out = s;
    for (auto [x, y] : g.composable_pairs()) {
      if (out.at(x, y).is_zero()) continue;
      out.at(x, y) = nu[static_cast<size_t>(x)] * nu[static_cast<size_t>(y)] /
                     nu[static_cast<size_t>(g.compose(x, y))] * s.at(x, y);
    }
    return out;
  };
  for (auto& comp : pm.components) {
    std::map<std::vector<typename K::Elem>, std::vector<int>> by_canon;
    for (int i : comp.members) {
      // canonical form: minimum table over all twists
      std::optional<std::vector<typename K::Elem>> best;
      std::vector<typename K::Elem> nu(static_cast<size_t>(g.size()), f.one());
      std::function<void(int)> rec = [&](int pos) {
        if (pos == g.size()) {
          auto t = twist(pm.sigmas[static_cast<size_t>(i)], nu).v;
          if (!best || t < *best) best = t;
          return;
        }
        for (long long v = 1; v < f.size(); ++v) {
          nu[static_cast<size_t>(pos)] = f.element(v);
          rec(pos + 1);
        }
      };
      rec(0);
      by_canon[*best].push_back(i);
    }
    for (auto& [canon, cls] : by_canon) comp.classes.push_back(cls);
  }

  // semilattice structure: the product of two idempotents is the idempotent
  // of the union of their E(G)-ideals
  auto& semilat = pm.report.add("component-semilattice");
  for (auto& c1 : pm.components)
    for (auto& c2 : pm.components) {
      if (c1.idempotent < 0 || c2.idempotent < 0) continue;
      ++semilat.checked;
      auto prod = factor_set_product(pm.sigmas[static_cast<size_t>(c1.idempotent)],
                                     pm.sigmas[static_cast<size_t>(c2.idempotent)]);
      std::set<int> u(c1.ideal.begin(), c1.ideal.end());
      u.insert(c2.ideal.begin(), c2.ideal.end());
      auto expected =
          project_exel_factor_set(cat, idempotent_of_ideal(f, cat.S, std::vector<int>(u.begin(), u.end())));
      if (!(prod == expected)) semilat.fail({{}, "idempotent product does not match ideal union"});
    }

  // closure: pm is a semigroup under pointwise product
  auto& closure = pm.report.add("pointwise-product-closure");
  if (pm.sigmas.size() <= 256) {
    for (auto& s1 : pm.sigmas)
      for (auto& s2 : pm.sigmas) {
        ++closure.checked;
        if (!seen.count(factor_set_product(s1, s2))) closure.fail({{}, "product of factor sets not enumerated"});
      }
  } else {
    closure.note = "skipped: too many factor sets for the pairwise sweep";
  }

  // the idempotent <-> ideal bijection, indexed by ideals of E(G)
  auto& bij = pm.report.add("idempotent-ideal-bijection");
  {
    auto ideals = semigroupoid_ideals(cat.S);
    std::set<std::vector<int>> ideal_set(ideals.begin(), ideals.end());
    std::set<std::vector<int>> seen_ideals;
    for (auto& comp : pm.components)
      if (comp.idempotent >= 0) seen_ideals.insert(comp.ideal);
    ++bij.checked;
    if (seen_ideals != ideal_set) bij.fail({{}, "component ideals do not biject with the ideals of E(G)"});
    if (seen_ideals.size() != pm.components.size()) bij.fail({{}, "distinct components share an ideal"});
    for (auto& comp : pm.components) {
      if (comp.idempotent < 0) continue;
      ++bij.checked;
      // round trip: the ideal's canonical idempotent projects back to eps
      if (!(project_exel_factor_set(cat, idempotent_of_ideal(f, cat.S, comp.ideal)) ==
            pm.sigmas[static_cast<size_t>(comp.idempotent)]))
        bij.fail({{}, "project(idempotent_of_ideal(ideal_of(eps))) != eps"});
    }
  }

  pm.report.subject = "pm enumeration";
  pm.report.wall_ms = clock.ms();
  return pm;
}

/// eta_x = Gamma(x)Gamma(x^-1) and the idempotents n_x, with the lemma's
/// property sweep.
template <class K, class M>
struct NxFamilies {
  std::vector<typename M::value_type> eta, n;
  AxiomReport report;
};

template <class K, class M>
NxFamilies<K, M> compute_nx(const PartialRep<K, M>& rep, const PartialFactorSet<K>& sigma) {
  Stopwatch clock;
  NxFamilies<K, M> out;
  const Groupoid& G = rep.G;
  const M& S = rep.model;
  auto L = [&](int i) { return G.label(i); };
  auto Ga = [&](int x) -> const typename M::value_type& { return rep.gamma[static_cast<size_t>(x)]; };

  auto& conv = out.report.add("identity-convention");
  for (int x = 0; x < G.size(); ++x) {
    ++conv.checked;
    if (!S.equal(S.mul(Ga(G.r(x)), Ga(x)), Ga(x)) || !S.equal(S.mul(Ga(x), Ga(G.d(x))), Ga(x)))
      conv.fail({{L(x)}, "Gamma(r(x)), Gamma(d(x)) are not one-sided identities for Gamma(x)"});
  }

  for (int x = 0; x < G.size(); ++x) {
    out.eta.push_back(S.mul(Ga(x), Ga(G.inv(x))));
    const auto& sym = sigma.at(G.inv(x), x);
    if (S.is_zero(Ga(x)) || sym.is_zero())
      out.n.push_back(S.zero);
    else
      out.n.push_back(S.scale(sigma.f.one() / sym, out.eta.back()));
  }

  auto& esq = out.report.add("eta-square");
  auto& nid = out.report.add("n-idempotent");
  auto& zeq = out.report.add("zero-equivalence");
  for (int x = 0; x < G.size(); ++x) {
    ++esq.checked;
    const auto& ex = out.eta[static_cast<size_t>(x)];
    if (!S.equal(S.mul(ex, ex), S.scale(sigma.at(x, G.inv(x)), ex)))
      esq.fail({{L(x)}, "eta_x^2 != eta_x sigma(x,x^-1)"});
    ++nid.checked;
    const auto& nx = out.n[static_cast<size_t>(x)];
    if (!S.equal(S.mul(nx, nx), nx)) nid.fail({{L(x)}, "n_x^2 != n_x"});
    ++zeq.checked;
    bool a = S.is_zero(ex), b = sigma.at(x, G.inv(x)).is_zero(), c = S.is_zero(Ga(x)), d = S.is_zero(nx);
    if (a != b || b != c || c != d) zeq.fail({{L(x)}, "eta/sigma/Gamma/n do not vanish simultaneously"});
  }

  auto& pairzero = out.report.add("eta-pair-zero");
  auto& comm = out.report.add("n-commute");
  for (int x = 0; x < G.size(); ++x)
    for (int y = 0; y < G.size(); ++y) {
      if (G.r(x) != G.r(y)) continue;
      ++pairzero.checked;
      bool a = S.is_zero(S.mul(out.eta[static_cast<size_t>(x)], out.eta[static_cast<size_t>(y)]));
      bool b = S.is_zero(S.mul(out.eta[static_cast<size_t>(y)], out.eta[static_cast<size_t>(x)]));
      bool c = S.is_zero(S.mul(out.n[static_cast<size_t>(x)], out.n[static_cast<size_t>(y)]));
      if (a != b || b != c) pairzero.fail({{L(x), L(y)}, "eta/n products do not vanish together"});
      ++comm.checked;
      if (!S.equal(S.mul(out.n[static_cast<size_t>(x)], out.n[static_cast<size_t>(y)]),
                   S.mul(out.n[static_cast<size_t>(y)], out.n[static_cast<size_t>(x)])))
        comm.fail({{L(x), L(y)}, "n_x n_y != n_y n_x"});
    }

  auto& inter = out.report.add("n-intertwine");
  for (auto [x, y] : rep.G.composable_pairs()) {
    ++inter.checked;
    int xy = G.compose(x, y);
    if (!S.equal(S.mul(Ga(x), out.n[static_cast<size_t>(y)]), S.mul(out.n[static_cast<size_t>(xy)], Ga(x))))
      inter.fail({{L(x), L(y)}, "Gamma(x) n_y != n_{xy} Gamma(x)"});
  }

  auto& units = out.report.add("sigma-units-on-dom");
  for (auto [x, y] : rep.G.composable_pairs()) {
    if (sigma.at(x, y).is_zero()) continue;
    ++units.checked;
    if (!sigma.at(x, G.d(x)).is_one() || !sigma.at(G.r(x), x).is_one() || !sigma.at(y, G.d(y)).is_one() ||
        !sigma.at(G.r(y), y).is_one())
      units.fail({{L(x), L(y)}, "sigma not 1 on the forced identity pairs"});
  }

  out.report.subject = "eta/n families";
  out.report.wall_ms = clock.ms();
  return out;
}

}  // namespace partact
