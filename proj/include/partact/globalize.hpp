#pragma once

#include <map>
#include <string>
#include <vector>

#include "partact/action.hpp"

namespace partact {

/// The extendability data of the globalization theorem: per composable pair
/// an invertible element wt(g,h) of D_{r(g)} with wt(g,h) 1_g 1_{gh} = w(g,h)
/// and the cocycle condition (*).
template <class K>
struct ExtensionData {
  PairTable<Vec<K>> wt;
};

/// The printed form of (*) has inner index wt(g,t); every use of (*) in the
/// construction needs the composable-triple shape wt(h,t).  The corrected
/// reading is the default; the literal one is kept for comparison runs and
/// is evaluated only on triples where (g,t) happens to compose.
enum class StarReading { corrected, literal };

inline const char* star_reading_name(StarReading r) {
  return r == StarReading::corrected ? "corrected" : "literal";
}

namespace detail {

template <class K>
struct WtInverses {
  std::map<std::pair<int, int>, Vec<K>> inv;
  bool ok = true;
  std::pair<int, int> bad{-1, -1};
};

template <class K>
WtInverses<K> wt_inverses(const TwistedPartialAction<K>& act, const ExtensionData<K>& ext) {
  WtInverses<K> out;
  for (auto& [pr, val] : ext.wt.entries()) {
    const Ideal<K>& Dr = act.ideal(act.G.r(pr.first));
    if (!Dr.contains(val)) {
      out.ok = false;
      out.bad = pr;
      return out;
    }
    auto inv = invert_in_ideal(val, Dr);
    if (!inv) {
      out.ok = false;
      out.bad = pr;
      return out;
    }
    out.inv.emplace(pr, *inv);
  }
  return out;
}

}  // namespace detail

/// Hypothesis check of the globalization theorem: invertibility of each
/// wt(g,h) in D_{r(g)}, compatibility with w, the normalization on
/// identity-shaped pairs the construction consumes, and condition (*).
template <class K>
AxiomReport verify_extension_data(const TwistedPartialAction<K>& act, const ExtensionData<K>& ext,
                                  StarReading reading = StarReading::corrected) {
  Stopwatch clock;
  act.check_shapes();
  require_valid(act.G);
  AxiomReport rep;
  rep.subject = "extension data";
  const Groupoid& G = act.G;
  const auto& A = *act.R;
  auto L = [&](int i) { return G.label(i); };

  std::vector<Vec<K>> one(static_cast<size_t>(G.size()), A.zero());
  auto& unital = rep.add("unital-ideals");
  for (int g = 0; g < G.size(); ++g) {
    ++unital.checked;
    auto u = act.unit(g);
    if (!u)
      throw UnsupportedCaseError("D(" + L(g) + ") has no unit; the globalization construction needs unital D_g");
    one[static_cast<size_t>(g)] = *u;
  }

  auto& shape = rep.add("wt-covers-pairs");
  for (auto [g, h] : G.composable_pairs()) {
    ++shape.checked;
    if (!ext.wt.contains(g, h)) shape.fail({{L(g), L(h)}, "missing wt entry"});
  }
  if (!shape.pass) {
    rep.wall_ms = clock.ms();
    return rep;
  }

  auto& invertible = rep.add("wt-invertible-in-Dr");
  std::map<std::pair<int, int>, Vec<K>> wti;
  for (auto& [pr, val] : ext.wt.entries()) {
    ++invertible.checked;
    const Ideal<K>& Dr = act.ideal(G.r(pr.first));
    if (!Dr.contains(val)) {
      invertible.fail({{L(pr.first), L(pr.second)}, "wt(g,h) lies outside D(r(g))"});
      continue;
    }
    auto inv = invert_in_ideal(val, Dr);
    if (!inv) {
      invertible.fail({{L(pr.first), L(pr.second)}, "wt(g,h) is not invertible in D(r(g))"});
      continue;
    }
    wti.emplace(pr, *inv);
  }

  auto& compat = rep.add("wt-compatible-with-w");
  for (auto [g, h] : G.composable_pairs()) {
    ++compat.checked;
    int gh = G.compose(g, h);
    Vec<K> lhs = A.mul(A.mul(ext.wt.at(g, h), one[static_cast<size_t>(g)]), one[static_cast<size_t>(gh)]);
    if (lhs != act.w.at(g, h))
      compat.fail({{L(g), L(h)}, A.show(lhs) + " != " + A.show(act.w.at(g, h))});
  }

  // The construction evaluates wt(r(g),g) and wt(g,d(g)) as 1_{r(g)}.
  auto& norm = rep.add("wt-identity-normalization");
  for (int g = 0; g < G.size(); ++g) {
    ++norm.checked;
    const Vec<K>& onerg = one[static_cast<size_t>(G.r(g))];
    if (ext.wt.at(G.r(g), g) != onerg) norm.fail({{L(g)}, "wt(r(g),g) != 1_{r(g)}"});
    if (ext.wt.at(g, G.d(g)) != onerg) norm.fail({{L(g)}, "wt(g,d(g)) != 1_{r(g)}"});
  }

  auto& star = rep.add("star");
  star.note = std::string("reading=") + star_reading_name(reading);
  if (invertible.pass) {
    long long skipped = 0;
    for (auto& t3 : composable_tuples(G, 3)) {
      int g = t3[0], h = t3[1], t = t3[2];
      int inner_a = reading == StarReading::corrected ? h : g;
      if (reading == StarReading::literal && !G.composable(g, t)) {
        ++skipped;
        continue;
      }
      ++star.checked;
      int ht = G.compose(h, t), gh = G.compose(g, h);
      Vec<K> lhs = A.mul(act.map(g).apply(A.mul(ext.wt.at(inner_a, t), one[static_cast<size_t>(G.inv(g))])),
                         ext.wt.at(g, ht));
      Vec<K> rhs = A.mul(A.mul(one[static_cast<size_t>(g)], ext.wt.at(g, h)), ext.wt.at(gh, t));
      if (lhs != rhs) star.fail({{L(g), L(h), L(t)}, A.show(lhs) + " != " + A.show(rhs)});
    }
    if (skipped > 0) star.note += ", skipped " + std::to_string(skipped) + " triples with (g,t) not composable";
  } else {
    star.pass = false;
    star.note += ", not evaluated: some wt not invertible";
  }

  rep.wall_ms = clock.ms();
  return rep;
}

/// Everything the constructive proof of the globalization theorem builds:
/// the function space F = R^{|G|}, the subspaces Y_g, the global maps
/// beta_g with twists u_{g,h}, the embeddings phi_e, the generated subrings
/// E_e, and the induced global action on T = prod E_e.
template <class K>
struct GlobalizationResult {
  TwistedPartialAction<K> input;
  ExtensionData<K> ext;

  AlgebraPtr<K> F;
  int block_dim = 0;
  std::vector<std::vector<int>> X;      // per arrow: { h : r(h) = r(g) }
  std::vector<Ideal<K>> Y;              // per arrow, subspace of F
  std::vector<LinearMap<K>> beta;       // Y_{g^-1} -> Y_g
  std::vector<LinearMap<K>> beta_inv;   // the displayed inverse formula
  PairTable<Vec<K>> u, u_inv;           // elements of F
  std::map<int, LinearMap<K>> phi;      // per identity: D_e -> F (into Y_e)
  std::vector<Ideal<K>> E;              // per arrow, subspace of F
  Ideal<K> T_sub;                       // span of the E_e inside F
  SubalgebraView<K> T;
  TwistedPartialAction<K> global;       // on T.sub

  Vec<K> coord(int h, const Vec<K>& v) const {
    Vec<K> out = F->zero();
    for (int i = 0; i < block_dim; ++i) out[static_cast<size_t>(h * block_dim + i)] = v[static_cast<size_t>(i)];
    return out;
  }
  Vec<K> block(const Vec<K>& f, int h) const {
    return Vec<K>(f.begin() + static_cast<size_t>(h) * block_dim, f.begin() + static_cast<size_t>(h + 1) * block_dim);
  }
  Vec<K> one_Y(int g) const {
    Vec<K> out = F->zero();
    for (int h : X[static_cast<size_t>(g)]) {
      auto u1 = unit_of_ideal(input.ideal(input.G.d(h)));
      Vec<K> blockv = u1 ? *u1 : input.R->zero();
      for (int i = 0; i < block_dim; ++i) out[static_cast<size_t>(h * block_dim + i)] = blockv[static_cast<size_t>(i)];
    }
    return out;
  }
};

template <class K>
GlobalizationResult<K> build_globalization(const TwistedPartialAction<K>& act, const ExtensionData<K>& ext) {
  {
    AxiomReport hyp = verify_extension_data(act, ext, StarReading::corrected);
    if (!hyp.passed()) {
      for (auto& c : hyp.checks)
        if (!c.pass) throw ArgumentError("extension data fails '" + c.name + "'; globalization not built");
    }
  }
  if (act.G.size() > 64) throw CapacityError("globalization capped at 64 arrows");

  GlobalizationResult<K> res;
  res.input = act;
  res.ext = ext;
  const Groupoid& G = act.G;
  const auto& R = *act.R;
  int n = G.size();
  res.block_dim = R.dim();
  res.F = Algebra<K>::direct_power(R, n, G.labels());
  const auto& F = *res.F;

  auto wti = detail::wt_inverses(act, ext);
  std::vector<Vec<K>> one(static_cast<size_t>(n));
  for (int g = 0; g < n; ++g) one[static_cast<size_t>(g)] = *act.unit(g);

  res.X.resize(static_cast<size_t>(n));
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h)
      if (G.r(h) == G.r(g)) res.X[static_cast<size_t>(g)].push_back(h);

  for (int g = 0; g < n; ++g) {
    std::vector<Vec<K>> rows;
    for (int h : res.X[static_cast<size_t>(g)]) {
      const Ideal<K>& block = act.ideal(G.d(h));
      for (int i = 0; i < block.dim(); ++i) rows.push_back(res.coord(h, block.basis_vec(i)));
    }
    res.Y.push_back(Ideal<K>::span(res.F, rows));
  }

  // beta_g(f)|_h = wt(h^-1,g) f(g^-1 h) wt(h^-1,g)^-1 on X_g, 0 elsewhere
  auto conj_block = [&](int hinv, int g, const Vec<K>& v) {
    return R.mul(R.mul(ext.wt.at(hinv, g), v), wti.inv.at({hinv, g}));
  };
  for (int g = 0; g < n; ++g) {
    const Ideal<K>& dom = res.Y[static_cast<size_t>(G.inv(g))];
    const Ideal<K>& cod = res.Y[static_cast<size_t>(g)];
    Mat<K> img(F.field(), dom.dim(), F.dim());
    Mat<K> img_inv(F.field(), cod.dim(), F.dim());
    for (int i = 0; i < dom.dim(); ++i) {
      Vec<K> f = dom.basis_vec(i);
      Vec<K> out = F.zero();
      for (int h : res.X[static_cast<size_t>(g)]) {
        Vec<K> v = conj_block(G.inv(h), g, res.block(f, G.compose(G.inv(g), h)));
        for (int c = 0; c < res.block_dim; ++c) out[static_cast<size_t>(h * res.block_dim + c)] = v[static_cast<size_t>(c)];
      }
      img.set_row(i, out);
    }
    // beta_g^-1(f)|_h = wt(h^-1 g^-1, g)^-1 f(gh) wt(h^-1 g^-1, g) on X_{g^-1}
    for (int i = 0; i < cod.dim(); ++i) {
      Vec<K> f = cod.basis_vec(i);
      Vec<K> out = F.zero();
      for (int h : res.X[static_cast<size_t>(G.inv(g))]) {
        int key = G.compose(G.inv(h), G.inv(g));
        Vec<K> v = R.mul(R.mul(wti.inv.at({key, g}), res.block(f, G.compose(g, h))), ext.wt.at(key, g));
        for (int c = 0; c < res.block_dim; ++c) out[static_cast<size_t>(h * res.block_dim + c)] = v[static_cast<size_t>(c)];
      }
      img_inv.set_row(i, out);
    }
    res.beta.emplace_back(dom, cod, img);
    res.beta_inv.emplace_back(cod, dom, img_inv);
  }

  // u(g,h)|_t = wt(t^-1,g) wt(t^-1 g,h) wt(t^-1,gh)^-1 on X_g
  for (auto [g, h] : G.composable_pairs()) {
    int gh = G.compose(g, h);
    Vec<K> uval = F.zero(), uinv = F.zero();
    for (int t : res.X[static_cast<size_t>(g)]) {
      int tinv = G.inv(t);
      int tg = G.compose(tinv, g);
      Vec<K> forward = R.mul(R.mul(ext.wt.at(tinv, g), ext.wt.at(tg, h)), wti.inv.at({tinv, gh}));
      Vec<K> backward = R.mul(R.mul(ext.wt.at(tinv, gh), wti.inv.at({tg, h})), wti.inv.at({tinv, g}));
      for (int c = 0; c < res.block_dim; ++c) {
        uval[static_cast<size_t>(t * res.block_dim + c)] = forward[static_cast<size_t>(c)];
        uinv[static_cast<size_t>(t * res.block_dim + c)] = backward[static_cast<size_t>(c)];
      }
    }
    res.u.set(g, h, uval);
    res.u_inv.set(g, h, uinv);
  }

  // phi_e(a)|_h = alpha_{h^-1}(a 1_h) on X_e
  for (int e : G.identities()) {
    const Ideal<K>& De = act.ideal(e);
    Mat<K> img(F.field(), De.dim(), F.dim());
    for (int i = 0; i < De.dim(); ++i) {
      Vec<K> a = De.basis_vec(i);
      Vec<K> out = F.zero();
      for (int h : res.X[static_cast<size_t>(e)]) {
        Vec<K> v = act.map(G.inv(h)).apply(R.mul(a, one[static_cast<size_t>(h)]));
        for (int c = 0; c < res.block_dim; ++c) out[static_cast<size_t>(h * res.block_dim + c)] = v[static_cast<size_t>(c)];
      }
      img.set_row(i, out);
    }
    res.phi.emplace(e, LinearMap<K>(De, res.Y[static_cast<size_t>(e)], img));
  }

  // E_e = subring generated by U_{r(h)=e} beta_h(phi_{d(h)}(D_{d(h)}))
  std::map<int, Ideal<K>> E_of;
  for (int e : G.identities()) {
    std::vector<Vec<K>> gens;
    for (int h : res.X[static_cast<size_t>(e)]) {
      const Ideal<K>& Dd = act.ideal(G.d(h));
      for (int i = 0; i < Dd.dim(); ++i)
        gens.push_back(res.beta[static_cast<size_t>(h)].apply(res.phi.at(G.d(h)).apply(Dd.basis_vec(i))));
    }
    E_of.emplace(e, gens.empty() ? Ideal<K>::zero(res.F) : subring_closure(gens, res.F));
  }
  for (int g = 0; g < n; ++g) res.E.push_back(E_of.at(G.r(g)));

  {
    std::vector<Vec<K>> rows;
    for (int e : G.identities())
      for (int i = 0; i < E_of.at(e).dim(); ++i) rows.push_back(E_of.at(e).basis_vec(i));
    res.T_sub = Ideal<K>::span(res.F, rows);
  }
  res.T = materialize_subalgebra(res.F, res.T_sub, "t");

  // package the restriction of beta to T as a twisted global action
  TwistedPartialAction<K> glob;
  glob.G = G;
  glob.R = res.T.sub;
  for (int g = 0; g < n; ++g) glob.D.push_back(res.T.lift(res.E[static_cast<size_t>(g)]));
  for (int g = 0; g < n; ++g) {
    const Ideal<K>& dom = glob.D[static_cast<size_t>(G.inv(g))];
    const Ideal<K>& cod = glob.D[static_cast<size_t>(g)];
    Mat<K> img(res.T.sub->field(), dom.dim(), res.T.sub->dim());
    for (int i = 0; i < dom.dim(); ++i)
      img.set_row(i, res.T.to_sub(res.beta[static_cast<size_t>(g)].apply(res.T.to_parent(dom.basis_vec(i)))));
    glob.alpha.emplace_back(dom, cod, img);
  }
  for (auto [g, h] : G.composable_pairs()) {
    const Ideal<K>& Eg = glob.D[static_cast<size_t>(g)];
    Vec<K> oneE_F;  // unit of E_g, expressed back in F
    if (Eg.is_zero())
      oneE_F = res.F->zero();
    else {
      auto uE = unit_of_ideal(Eg);
      if (!uE)
        throw UnsupportedCaseError("E(" + G.label(g) + ") has no unit; the restricted twist u(g,h)1_E is not representable");
      oneE_F = res.T.to_parent(*uE);
    }
    // u(g,h) lives in Y_g; only its product with 1_{E_g} is promised to
    // land in E_g (u E_g = E_g), so multiply in F before converting.
    glob.w.set(g, h, res.T.to_sub(res.F->mul(res.u.at(g, h), oneE_F)));
  }
  res.global = std::move(glob);
  return res;
}

/// Enveloping-action checks for the built globalization against the input
/// action, plus the proof-level identities (beta inverses, u-normalization,
/// Steps 1-3) and the axioms of the packaged global action.
template <class K>
AxiomReport verify_enveloping(const TwistedPartialAction<K>& act, const GlobalizationResult<K>& res) {
  Stopwatch clock;
  AxiomReport rep;
  rep.subject = "enveloping action";
  const Groupoid& G = act.G;
  const auto& R = *act.R;
  const auto& F = *res.F;
  auto L = [&](int i) { return G.label(i); };
  auto phi_img = [&](int e, const Ideal<K>& sub) { return res.phi.at(e).image_of(sub); };

  auto& inj = rep.add("phi-identity-coordinate");
  for (int e : G.identities()) {
    const Ideal<K>& De = act.ideal(e);
    for (int i = 0; i < De.dim(); ++i) {
      ++inj.checked;
      Vec<K> a = De.basis_vec(i);
      if (res.block(res.phi.at(e).apply(a), e) != a) inj.fail({{L(e)}, "phi_e(a)|_e != a"});
    }
  }

  auto& d1 = rep.add("enveloping-i");
  for (int e : G.identities()) {
    ++d1.checked;
    if (!phi_img(e, act.ideal(e)).is_ideal_of(res.E[static_cast<size_t>(e)]))
      d1.fail({{L(e)}, "phi_e(D_e) is not an ideal of E_e"});
  }

  auto& d2 = rep.add("enveloping-ii");
  for (int g = 0; g < G.size(); ++g) {
    ++d2.checked;
    Ideal<K> sum = Ideal<K>::zero(res.F);
    for (int h : res.X[static_cast<size_t>(g)])
      sum = sum.sum(res.beta[static_cast<size_t>(h)].image_of(phi_img(G.d(h), act.ideal(G.d(h)))));
    if (sum != res.E[static_cast<size_t>(g)])
      d2.fail({{L(g)}, "E_g != sum of beta_h(phi(D_{d(h)})) over r(h)=r(g)"});
  }

  auto& d3 = rep.add("enveloping-iii");
  for (int g = 0; g < G.size(); ++g) {
    ++d3.checked;
    Ideal<K> lhs = phi_img(G.r(g), act.ideal(g));
    Ideal<K> rhs = phi_img(G.r(g), act.ideal(G.r(g)))
                       .intersect(res.beta[static_cast<size_t>(g)].image_of(phi_img(G.d(g), act.ideal(G.d(g)))));
    if (lhs != rhs) d3.fail({{L(g)}, "phi(D_g) != phi(D_{r(g)}) ∩ beta_g(phi(D_{d(g)}))"});
  }

  auto& d4 = rep.add("enveloping-iv");
  for (int g = 0; g < G.size(); ++g) {
    const Ideal<K>& dom = act.ideal(G.inv(g));
    for (int i = 0; i < dom.dim(); ++i) {
      ++d4.checked;
      Vec<K> a = dom.basis_vec(i);
      Vec<K> lhs = res.beta[static_cast<size_t>(g)].apply(res.phi.at(G.d(g)).apply(a));
      Vec<K> rhs = res.phi.at(G.r(g)).apply(act.map(g).apply(a));
      if (lhs != rhs) d4.fail({{L(g)}, "beta_g(phi_{d(g)}(a)) != phi_{r(g)}(alpha_g(a)), a=" + R.show(a)});
    }
  }

  auto& d5 = rep.add("enveloping-v");
  for (auto [g, h] : G.composable_pairs()) {
    Ideal<K> DgDgh = ideal_product(act.ideal(g), act.ideal(G.compose(g, h)));
    const Vec<K>& wv = act.w.at(g, h);
    for (int i = 0; i < DgDgh.dim(); ++i) {
      ++d5.checked;
      Vec<K> a = DgDgh.basis_vec(i);
      const auto& phirg = res.phi.at(G.r(g));
      if (phirg.apply(R.mul(a, wv)) != F.mul(phirg.apply(a), res.u.at(g, h)))
        d5.fail({{L(g), L(h)}, "phi(a w) != phi(a) u, a=" + R.show(a)});
      if (phirg.apply(R.mul(wv, a)) != F.mul(res.u.at(g, h), phirg.apply(a)))
        d5.fail({{L(g), L(h)}, "phi(w a) != u phi(a), a=" + R.show(a)});
    }
  }

  auto& binv = rep.add("beta-inverse");
  for (int g = 0; g < G.size(); ++g) {
    const Ideal<K>& dom = res.Y[static_cast<size_t>(G.inv(g))];
    for (int i = 0; i < dom.dim(); ++i) {
      ++binv.checked;
      Vec<K> f = dom.basis_vec(i);
      if (res.beta_inv[static_cast<size_t>(g)].apply(res.beta[static_cast<size_t>(g)].apply(f)) != f)
        binv.fail({{L(g)}, "beta_g^-1 ∘ beta_g != id on Y_{g^-1}"});
    }
    const Ideal<K>& cod = res.Y[static_cast<size_t>(g)];
    for (int i = 0; i < cod.dim(); ++i) {
      ++binv.checked;
      Vec<K> f = cod.basis_vec(i);
      if (res.beta[static_cast<size_t>(g)].apply(res.beta_inv[static_cast<size_t>(g)].apply(f)) != f)
        binv.fail({{L(g)}, "beta_g ∘ beta_g^-1 != id on Y_g"});
    }
  }

  auto& bcomp = rep.add("beta-compose");
  for (auto [g, h] : G.composable_pairs()) {
    int gh = G.compose(g, h);
    const Ideal<K>& dom = res.Y[static_cast<size_t>(G.inv(h))];
    for (int i = 0; i < dom.dim(); ++i) {
      ++bcomp.checked;
      Vec<K> f = dom.basis_vec(i);
      Vec<K> lhs = res.beta[static_cast<size_t>(g)].apply(res.beta[static_cast<size_t>(h)].apply(f));
      Vec<K> rhs = F.mul(F.mul(res.u.at(g, h), res.beta[static_cast<size_t>(gh)].apply(f)), res.u_inv.at(g, h));
      if (lhs != rhs) bcomp.fail({{L(g), L(h)}, "beta_g beta_h != u beta_gh(.) u^-1"});
    }
  }

  auto& unorm = rep.add("u-normalization");
  for (int g = 0; g < G.size(); ++g) {
    ++unorm.checked;
    Vec<K> oneY = res.one_Y(g);
    if (res.u.at(G.r(g), g) != oneY) unorm.fail({{L(g)}, "u(r(g),g) != 1_{Y_g}"});
    if (res.u.at(g, G.d(g)) != oneY) unorm.fail({{L(g)}, "u(g,d(g)) != 1_{Y_g}"});
  }

  auto& s1 = rep.add("u-phi-twist");
  for (auto [g, h] : G.composable_pairs()) {
    const Ideal<K>& Dr = act.ideal(G.r(g));
    const auto& phirg = res.phi.at(G.r(g));
    for (int i = 0; i < Dr.dim(); ++i) {
      ++s1.checked;
      Vec<K> a = Dr.basis_vec(i);
      if (F.mul(res.u.at(g, h), phirg.apply(a)) != phirg.apply(R.mul(res.ext.wt.at(g, h), a)))
        s1.fail({{L(g), L(h)}, "u(g,h) phi(a) != phi(wt(g,h) a)"});
    }
  }

  auto& s2 = rep.add("beta-inverse-conjugation");
  for (int t = 0; t < G.size(); ++t) {
    int tinv = G.inv(t);
    const Ideal<K>& Yt = res.Y[static_cast<size_t>(t)];
    for (int i = 0; i < Yt.dim(); ++i) {
      ++s2.checked;
      Vec<K> f = Yt.basis_vec(i);
      Vec<K> lhs = res.beta_inv[static_cast<size_t>(t)].apply(f);
      Vec<K> rhs = F.mul(F.mul(res.u_inv.at(tinv, t), res.beta[static_cast<size_t>(tinv)].apply(f)), res.u.at(tinv, t));
      if (lhs != rhs) s2.fail({{L(t)}, "beta_t^-1 != u(t^-1,t)^-1 beta_{t^-1}(.) u(t^-1,t)"});
    }
  }

  auto& s3 = rep.add("u-cocycle");
  for (auto& t3 : composable_tuples(G, 3)) {
    int g = t3[0], h = t3[1], t = t3[2];
    ++s3.checked;
    Vec<K> lhs = F.mul(res.beta[static_cast<size_t>(g)].apply(res.u.at(h, t)), res.u.at(g, G.compose(h, t)));
    Vec<K> rhs = F.mul(res.u.at(g, h), res.u.at(G.compose(g, h), t));
    if (lhs != rhs) s3.fail({{L(g), L(h), L(t)}, "beta_g(u(h,t)) u(g,ht) != u(g,h) u(gh,t)"});
  }

  auto& stab = rep.add("u-stabilizes-E");
  for (auto [g, h] : G.composable_pairs()) {
    ++stab.checked;
    const Ideal<K>& Eg = res.E[static_cast<size_t>(g)];
    std::vector<Vec<K>> lrows, rrows;
    for (int i = 0; i < Eg.dim(); ++i) {
      lrows.push_back(F.mul(res.u.at(g, h), Eg.basis_vec(i)));
      rrows.push_back(F.mul(Eg.basis_vec(i), res.u.at(g, h)));
    }
    if (Ideal<K>::span(res.F, lrows) != Eg) stab.fail({{L(g), L(h)}, "u(g,h) E_g != E_g"});
    if (Ideal<K>::span(res.F, rrows) != Eg) stab.fail({{L(g), L(h)}, "E_g u(g,h) != E_g"});
  }

  {
    AxiomReport sub = verify_tpa(res.global);
    auto& gax = rep.add("global-action-axioms");
    gax.checked = static_cast<long long>(sub.checks.size());
    if (!sub.passed()) {
      for (auto& c : sub.checks)
        if (!c.pass)
          gax.fail({c.witnesses.empty() ? std::vector<std::string>{} : c.witnesses[0].where,
                    "global action fails '" + c.name + "'"});
    }
    auto& gg = rep.add("global-action-is-global");
    gg.checked = G.size();
    if (!is_global(res.global)) gg.fail({{}, "some E_g differs from E_{r(g)}"});
  }

  rep.wall_ms = clock.ms();
  return rep;
}

/// Restrict the built globalization back along phi and compare with the
/// input action coordinatewise.
template <class K>
AxiomReport verify_rerestriction(const TwistedPartialAction<K>& act, const GlobalizationResult<K>& res) {
  Stopwatch clock;
  AxiomReport rep;
  rep.subject = "re-restriction";
  const Groupoid& G = act.G;
  auto L = [&](int i) { return G.label(i); };

  // phi-image of the acted-on ring, as an ideal of T
  std::vector<Vec<K>> rows;
  for (int e : G.identities()) {
    const Ideal<K>& De = act.ideal(e);
    for (int i = 0; i < De.dim(); ++i) rows.push_back(res.T.to_sub(res.phi.at(e).apply(De.basis_vec(i))));
  }
  Ideal<K> Rphi = Ideal<K>::span(res.T.sub, rows);
  RestrictionResult<K> rr = restrict_global(res.global, Rphi);

  // transport a parent-ring element a (in D_{r(e)} for the right identity)
  // through phi and both subalgebra views
  auto transport = [&](int e, const Vec<K>& a) {
    return rr.view.to_sub(res.T.to_sub(res.phi.at(e).apply(a)));
  };

  auto& dmatch = rep.add("ideals-match");
  for (int g = 0; g < G.size(); ++g) {
    ++dmatch.checked;
    std::vector<Vec<K>> img;
    for (int i = 0; i < act.ideal(g).dim(); ++i) img.push_back(transport(G.r(g), act.ideal(g).basis_vec(i)));
    if (rr.action.ideal(g) != Ideal<K>::span(rr.action.R, img))
      dmatch.fail({{L(g)}, "restricted D(g) != phi(D(g))"});
  }

  auto& amatch = rep.add("maps-match");
  for (int g = 0; g < G.size(); ++g) {
    const Ideal<K>& dom = act.ideal(G.inv(g));
    for (int i = 0; i < dom.dim(); ++i) {
      ++amatch.checked;
      Vec<K> a = dom.basis_vec(i);
      if (rr.action.map(g).apply(transport(G.d(g), a)) != transport(G.r(g), act.map(g).apply(a))) {
        amatch.fail({{L(g)}, "restricted alpha(g) disagrees with phi-transport"});
        break;
      }
    }
  }

  auto& wmatch = rep.add("twists-match");
  for (auto [g, h] : G.composable_pairs()) {
    ++wmatch.checked;
    if (rr.action.w.at(g, h) != transport(G.r(g), act.w.at(g, h)))
      wmatch.fail({{L(g), L(h)}, "restricted w(g,h) != phi(w(g,h))"});
  }

  rep.wall_ms = clock.ms();
  return rep;
}

}  // namespace partact
