#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "partact/globalize.hpp"

namespace partact {

/// The twisted crossed product R x|_{alpha,w} G as a concrete algebra with
/// labeled basis { (g, i) : g arrow, i-th basis vector of D_g } and the
/// product (a_g d_g)(b_h d_h) = alpha_g(alpha_g^-1(a_g) b_h) w(g,h) d_{gh}.
template <class K>
struct CrossedProduct {
  TwistedPartialAction<K> action;
  AlgebraPtr<K> alg;
  std::vector<std::pair<int, int>> basis_label;  // basis index -> (arrow, row in D_g)
  std::vector<int> offset;                       // arrow -> first basis index
  std::optional<Vec<K>> unit;                    // sum of 1_e delta_e when it exists

  int dim() const { return alg->dim(); }

  /// a delta_g as a crossed-product coordinate vector (a in ambient coords).
  Vec<K> embed(int g, const Vec<K>& a) const {
    auto c = action.ideal(g).coords(a);
    if (!c) throw ArgumentError("element lies outside D(" + action.G.label(g) + ")");
    Vec<K> out = alg->zero();
    for (int i = 0; i < action.ideal(g).dim(); ++i)
      out[static_cast<size_t>(offset[static_cast<size_t>(g)] + i)] = (*c)[static_cast<size_t>(i)];
    return out;
  }

  /// Sparse view: arrow -> component in ambient coordinates of the base ring.
  std::map<int, Vec<K>> split(const Vec<K>& v) const {
    std::map<int, Vec<K>> out;
    for (int g = 0; g < action.G.size(); ++g) {
      const Ideal<K>& Dg = action.ideal(g);
      Vec<K> comp = action.R->zero();
      bool nonzero = false;
      for (int i = 0; i < Dg.dim(); ++i) {
        const auto& c = v[static_cast<size_t>(offset[static_cast<size_t>(g)] + i)];
        if (c.is_zero()) continue;
        nonzero = true;
        Vec<K> b = Dg.basis_vec(i);
        for (size_t j = 0; j < comp.size(); ++j) comp[j] += c * b[j];
      }
      if (nonzero) out.emplace(g, std::move(comp));
    }
    return out;
  }
};

/// Builds the crossed product.  Refuses an action that fails verify_tpa
/// unless the caller explicitly asks for a diagnostic build.
template <class K>
CrossedProduct<K> build_crossed_product(const TwistedPartialAction<K>& act, bool require_verified = true) {
  if (require_verified) {
    AxiomReport rep = verify_tpa(act);
    if (!rep.passed()) {
      for (auto& c : rep.checks)
        if (!c.pass) throw ArgumentError("crossed product refused: action fails axiom '" + c.name + "'");
    }
  } else {
    act.check_shapes();
  }

  CrossedProduct<K> cp;
  cp.action = act;
  const Groupoid& G = cp.action.G;
  const auto& R = *cp.action.R;

  int dim = 0;
  cp.offset.assign(static_cast<size_t>(G.size()), 0);
  std::vector<std::string> labels;
  for (int g = 0; g < G.size(); ++g) {
    cp.offset[static_cast<size_t>(g)] = dim;
    for (int i = 0; i < cp.action.ideal(g).dim(); ++i) {
      cp.basis_label.emplace_back(g, i);
      labels.push_back(R.show(cp.action.ideal(g).basis_vec(i)) + ".d" + G.label(g));
      ++dim;
    }
  }

  std::vector<LinearMap<K>> alpha_inv;
  for (int g = 0; g < G.size(); ++g) alpha_inv.push_back(cp.action.map(g).inverse());

  std::vector<std::vector<Vec<K>>> table(static_cast<size_t>(dim),
                                         std::vector<Vec<K>>(static_cast<size_t>(dim), zero_vec(R.field(), dim)));
  for (int p = 0; p < dim; ++p) {
    auto [g, i] = cp.basis_label[static_cast<size_t>(p)];
    Vec<K> x = alpha_inv[static_cast<size_t>(g)].apply(cp.action.ideal(g).basis_vec(i));
    for (int q = 0; q < dim; ++q) {
      auto [h, j] = cp.basis_label[static_cast<size_t>(q)];
      if (!G.composable(g, h)) continue;
      int gh = G.compose(g, h);
      Vec<K> bh = cp.action.ideal(h).basis_vec(j);
      Vec<K> prod = R.mul(cp.action.map(g).apply(R.mul(x, bh)), cp.action.w.at(g, h));
      auto coords = cp.action.ideal(gh).coords(prod);
      if (!coords)
        throw ArgumentError("crossed-product component at (" + G.label(g) + "," + G.label(h) +
                            ") fell outside D(" + G.label(gh) + "); the action is not a twisted partial action");
      Vec<K> row = zero_vec(R.field(), dim);
      for (int k = 0; k < cp.action.ideal(gh).dim(); ++k)
        row[static_cast<size_t>(cp.offset[static_cast<size_t>(gh)] + k)] = (*coords)[static_cast<size_t>(k)];
      table[static_cast<size_t>(p)][static_cast<size_t>(q)] = std::move(row);
    }
  }
  cp.alg = Algebra<K>::from_table(R.field(), std::move(labels), table, /*check=*/false);

  bool all_unital = true;
  Vec<K> one = cp.alg->zero();
  for (int e : G.identities()) {
    auto u = cp.action.unit(e);
    if (!u) {
      all_unital = false;
      break;
    }
    one = vec_add<K>(one, cp.embed(e, *u));
  }
  if (all_unital) cp.unit = one;
  return cp;
}

/// Exhaustive associativity sweep plus the unit law when a unit exists.
template <class K>
AxiomReport verify_associativity(const CrossedProduct<K>& cp) {
  Stopwatch clock;
  AxiomReport rep;
  rep.subject = "crossed product";
  const auto& A = *cp.alg;
  auto name = [&](int p) {
    auto [g, i] = cp.basis_label[static_cast<size_t>(p)];
    return cp.action.R->show(cp.action.ideal(g).basis_vec(i)) + ".d" + cp.action.G.label(g);
  };

  auto& assoc = rep.add("associativity");
  for (int p = 0; p < A.dim(); ++p)
    for (int q = 0; q < A.dim(); ++q) {
      Vec<K> pq = A.mul(A.basis_vec(p), A.basis_vec(q));
      for (int s = 0; s < A.dim(); ++s) {
        ++assoc.checked;
        Vec<K> lhs = A.mul(pq, A.basis_vec(s));
        Vec<K> rhs = A.mul(A.basis_vec(p), A.mul(A.basis_vec(q), A.basis_vec(s)));
        if (lhs != rhs) assoc.fail({{name(p), name(q), name(s)}, A.show(lhs) + " != " + A.show(rhs)});
      }
    }

  auto& unity = rep.add("unit-law");
  if (cp.unit) {
    for (int p = 0; p < A.dim(); ++p) {
      ++unity.checked;
      Vec<K> b = A.basis_vec(p);
      if (A.mul(*cp.unit, b) != b || A.mul(b, *cp.unit) != b)
        unity.fail({{name(p)}, "1_A x != x or x 1_A != x"});
    }
  } else {
    unity.note = "no unit: some D_e is a nonzero ideal without identity";
  }

  rep.wall_ms = clock.ms();
  return rep;
}

struct MoritaDims {
  int A = 0, B = 0, M = 0, N = 0;
};

template <class K>
struct MoritaReport {
  AxiomReport checks;
  MoritaDims dims;
};

/// Morita-context verdicts: with A = R x| G embedded in B = T x| G via
/// phi, checks B 1_A = N, 1_A B = M, 1_A B 1_A = A, B 1_A B = B as canonical
/// subspaces, the bimodule absorptions, and surjectivity of tau, tau' as
/// span(MN) = A, span(NM) = B.
template <class K>
MoritaReport<K> morita_context(const TwistedPartialAction<K>& act, const GlobalizationResult<K>& res) {
  Stopwatch clock;
  if (res.global.D.empty()) throw ArgumentError("morita_context needs a built globalization");
  if (!unit_of_ideal(Ideal<K>::full(act.R))) throw ArgumentError("morita_context needs a unital base ring");

  MoritaReport<K> out;
  AxiomReport& rep = out.checks;
  rep.subject = "morita context";
  const Groupoid& G = act.G;

  CrossedProduct<K> A = build_crossed_product(act);
  CrossedProduct<K> B = build_crossed_product(res.global);
  const auto& BA = *B.alg;
  out.dims.A = A.dim();
  out.dims.B = B.dim();
  if (!A.unit) throw ArgumentError("morita_context: A has no unit (some D_e not unital)");

  // phi-embedding of a delta_g into B: phi_{r(g)}(a) delta_g
  auto embed_A = [&](int g, const Vec<K>& a) {
    return B.embed(g, res.T.to_sub(res.phi.at(G.r(g)).apply(a)));
  };

  // canonical copy of A inside B
  std::vector<Vec<K>> a_rows;
  for (int g = 0; g < G.size(); ++g)
    for (int i = 0; i < act.ideal(g).dim(); ++i) a_rows.push_back(embed_A(g, act.ideal(g).basis_vec(i)));
  Ideal<K> Ahat = Ideal<K>::span(B.alg, a_rows);

  Vec<K> oneA = BA.zero();
  for (int e : G.identities()) oneA = vec_add<K>(oneA, embed_A(e, *act.unit(e)));

  // M = sum over g of phi(D_{r(g)}) delta_g, N = sum of beta_g(phi(D_{d(g)})) delta_g
  std::vector<Vec<K>> m_rows, n_rows;
  for (int g = 0; g < G.size(); ++g) {
    const Ideal<K>& Dr = act.ideal(G.r(g));
    for (int i = 0; i < Dr.dim(); ++i)
      m_rows.push_back(B.embed(g, res.T.to_sub(res.phi.at(G.r(g)).apply(Dr.basis_vec(i)))));
    const Ideal<K>& Dd = act.ideal(G.d(g));
    for (int i = 0; i < Dd.dim(); ++i)
      n_rows.push_back(B.embed(
          g, res.T.to_sub(res.beta[static_cast<size_t>(g)].apply(res.phi.at(G.d(g)).apply(Dd.basis_vec(i))))));
  }
  Ideal<K> M = Ideal<K>::span(B.alg, m_rows);
  Ideal<K> N = Ideal<K>::span(B.alg, n_rows);
  out.dims.M = M.dim();
  out.dims.N = N.dim();

  Ideal<K> Bfull = Ideal<K>::full(B.alg);
  auto right_mul = [&](const Ideal<K>& S, const Vec<K>& x) {
    std::vector<Vec<K>> rows;
    for (int i = 0; i < S.dim(); ++i) rows.push_back(BA.mul(S.basis_vec(i), x));
    return Ideal<K>::span(B.alg, rows);
  };
  auto left_mul = [&](const Vec<K>& x, const Ideal<K>& S) {
    std::vector<Vec<K>> rows;
    for (int i = 0; i < S.dim(); ++i) rows.push_back(BA.mul(x, S.basis_vec(i)));
    return Ideal<K>::span(B.alg, rows);
  };
  auto span_product = [&](const Ideal<K>& S, const Ideal<K>& T2) {
    std::vector<Vec<K>> rows;
    for (int i = 0; i < S.dim(); ++i)
      for (int j = 0; j < T2.dim(); ++j) rows.push_back(BA.mul(S.basis_vec(i), T2.basis_vec(j)));
    return Ideal<K>::span(B.alg, rows);
  };

  auto& c1 = rep.add("B.1A=N");
  c1.checked = 1;
  if (right_mul(Bfull, oneA) != N) c1.fail({{}, "B 1_A differs from N"});

  auto& c2 = rep.add("1A.B=M");
  c2.checked = 1;
  if (left_mul(oneA, Bfull) != M) c2.fail({{}, "1_A B differs from M"});

  auto& c3 = rep.add("1A.B.1A=A");
  c3.checked = 1;
  if (right_mul(left_mul(oneA, Bfull), oneA) != Ahat) c3.fail({{}, "1_A B 1_A differs from the copy of A"});

  auto& c4 = rep.add("B.1A.B=B");
  c4.checked = 1;
  if (span_product(right_mul(Bfull, oneA), Bfull) != Bfull) c4.fail({{}, "B 1_A B differs from B"});

  auto& c5 = rep.add("tau-onto");
  c5.checked = 1;
  if (span_product(M, N) != Ahat) c5.fail({{}, "span(M N) differs from A"});

  auto& c6 = rep.add("tau-prime-onto");
  c6.checked = 1;
  if (span_product(N, M) != Bfull) c6.fail({{}, "span(N M) differs from B"});

  auto& bi = rep.add("bimodule-absorption");
  bi.checked = 4;
  if (!M.contains_subspace(span_product(Ahat, M))) bi.fail({{}, "A M not inside M"});
  if (!N.contains_subspace(span_product(N, Ahat))) bi.fail({{}, "N A not inside N"});
  if (!M.contains_subspace(span_product(M, Bfull))) bi.fail({{}, "M B not inside M (M is not a right ideal)"});
  if (!N.contains_subspace(span_product(Bfull, N))) bi.fail({{}, "B N not inside N (N is not a left ideal)"});

  rep.wall_ms = clock.ms();
  return out;
}

}  // namespace partact
