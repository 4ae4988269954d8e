#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "partact/groupoid.hpp"

namespace partact {

/// Finite semigroupoid: elements with a partial associative product.  The
/// category flag adds d/r structure (needed whenever r(x) appears in a
/// factor-set condition); the involution is optional.
struct Semigroupoid {
  std::vector<std::string> labels;
  std::vector<std::vector<int>> prod;  // -1 = undefined
  std::vector<int> inv;                // empty when no involution is declared
  bool category = false;
  std::vector<int> dom, ran;           // category only
  std::vector<int> identities;         // category only

  int size() const { return static_cast<int>(labels.size()); }
  int mul(int x, int y) const { return prod[static_cast<size_t>(x)][static_cast<size_t>(y)]; }
  bool composable(int x, int y) const { return mul(x, y) >= 0; }
  const std::string& label(int i) const { return labels[static_cast<size_t>(i)]; }
  int d(int x) const { return dom[static_cast<size_t>(x)]; }
  int r(int x) const { return ran[static_cast<size_t>(x)]; }

  std::vector<std::pair<int, int>> composable_pairs() const {
    std::vector<std::pair<int, int>> out;
    for (int x = 0; x < size(); ++x)
      for (int y = 0; y < size(); ++y)
        if (composable(x, y)) out.emplace_back(x, y);
    return out;
  }

  std::vector<std::array<int, 3>> composable_triples() const {
    std::vector<std::array<int, 3>> out;
    for (int x = 0; x < size(); ++x)
      for (int y = 0; y < size(); ++y) {
        if (!composable(x, y)) continue;
        for (int z = 0; z < size(); ++z)
          if (composable(y, z) && composable(mul(x, y), z)) out.push_back({x, y, z});
      }
    return out;
  }

  friend bool operator==(const Semigroupoid& a, const Semigroupoid& b) {
    return a.labels == b.labels && a.prod == b.prod;
  }
};

inline Semigroupoid as_semigroupoid(const Groupoid& g) {
  require_valid(g);
  Semigroupoid s;
  s.labels = g.labels();
  s.prod = g.compose_table();
  s.inv.resize(static_cast<size_t>(g.size()));
  s.dom.resize(static_cast<size_t>(g.size()));
  s.ran.resize(static_cast<size_t>(g.size()));
  for (int x = 0; x < g.size(); ++x) {
    s.inv[static_cast<size_t>(x)] = g.inv(x);
    s.dom[static_cast<size_t>(x)] = g.d(x);
    s.ran[static_cast<size_t>(x)] = g.r(x);
  }
  s.category = true;
  s.identities = g.identities();
  return s;
}

/// Associativity in the catenary sense: whenever one association of a
/// triple is defined the other must be too, with equal values.  Category
/// axioms are checked when flagged.
inline AxiomReport verify_semigroupoid(const Semigroupoid& s) {
  Stopwatch clock;
  AxiomReport rep;
  rep.subject = "semigroupoid";
  auto L = [&](int i) { return s.label(i); };

  auto& assoc = rep.add("associativity");
  for (int x = 0; x < s.size(); ++x)
    for (int y = 0; y < s.size(); ++y) {
      int xy = s.mul(x, y);
      for (int z = 0; z < s.size(); ++z) {
        int yz = s.mul(y, z);
        bool lhs = xy >= 0 && s.mul(xy, z) >= 0;
        bool rhs = yz >= 0 && s.mul(x, yz) >= 0;
        if (!lhs && !rhs) continue;
        ++assoc.checked;
        if (lhs != rhs)
          assoc.fail({{L(x), L(y), L(z)}, "one association defined, the other not"});
        else if (s.mul(xy, z) != s.mul(x, yz))
          assoc.fail({{L(x), L(y), L(z)}, "(xy)z != x(yz)"});
      }
    }

  if (s.category) {
    auto& cat = rep.add("category-identities");
    std::set<int> idset(s.identities.begin(), s.identities.end());
    for (int e : s.identities) {
      ++cat.checked;
      if (s.mul(e, e) != e) cat.fail({{L(e)}, "declared identity is not idempotent"});
      for (int x = 0; x < s.size(); ++x) {
        if (s.composable(e, x) && s.mul(e, x) != x) cat.fail({{L(e), L(x)}, "e x != x"});
        if (s.composable(x, e) && s.mul(x, e) != x) cat.fail({{L(x), L(e)}, "x e != x"});
      }
    }
    auto& drc = rep.add("category-d-r");
    for (int x = 0; x < s.size(); ++x) {
      ++drc.checked;
      int found_r = -1, found_d = -1;
      for (int e : s.identities) {
        if (s.composable(e, x)) {
          if (found_r >= 0)
            drc.fail({{L(x)}, "two identities compose on the left"});
          found_r = e;
        }
        if (s.composable(x, e)) {
          if (found_d >= 0) drc.fail({{L(x)}, "two identities compose on the right"});
          found_d = e;
        }
      }
      if (found_r != s.r(x)) drc.fail({{L(x)}, "declared r(x) is not the left identity"});
      if (found_d != s.d(x)) drc.fail({{L(x)}, "declared d(x) is not the right identity"});
      for (int y = 0; y < s.size(); ++y) {
        bool should = s.d(x) == s.r(y);
        if (s.composable(x, y) != should) {
          drc.fail({{L(x), L(y)}, "composability does not match d(x) = r(y)"});
          break;
        }
      }
    }
  }

  rep.wall_ms = clock.ms();
  return rep;
}

/// Inverse semigroupoid check: each x has a unique y with xyx = x, yxy = y
/// (both products defined), found by exhaustive search; category axioms are
/// included when flagged.
inline AxiomReport verify_inverse_category(const Semigroupoid& s) {
  AxiomReport rep = verify_semigroupoid(s);
  Stopwatch clock;
  rep.subject = "inverse category";
  auto L = [&](int i) { return s.label(i); };

  auto& unique_inv = rep.add("unique-generalized-inverse");
  for (int x = 0; x < s.size(); ++x) {
    ++unique_inv.checked;
    std::vector<int> partners;
    for (int y = 0; y < s.size(); ++y) {
      int xy = s.mul(x, y), yx = s.mul(y, x);
      if (xy < 0 || yx < 0) continue;
      if (s.mul(xy, x) == x && s.mul(yx, y) == y) partners.push_back(y);
    }
    if (partners.size() != 1) {
      unique_inv.fail({{L(x)}, partners.empty() ? "no generalized inverse" : "generalized inverse not unique"});
      continue;
    }
    if (!s.inv.empty() && s.inv[static_cast<size_t>(x)] != partners[0])
      unique_inv.fail({{L(x)}, "declared involution disagrees with the unique partner"});
  }

  rep.wall_ms += clock.ms();
  return rep;
}

/// Standard form (A, g) of eps_{a1} ... eps_{ak} [g] in the Exel inverse
/// category: marker arrows A with r(a) = r(g), identities and the base
/// arrow excluded, stored sorted.
struct ExelElement {
  std::vector<int> markers;
  int base = -1;

  friend bool operator<(const ExelElement& a, const ExelElement& b) {
    if (a.base != b.base) return a.base < b.base;
    return a.markers < b.markers;
  }
  friend bool operator==(const ExelElement& a, const ExelElement& b) {
    return a.base == b.base && a.markers == b.markers;
  }
};

inline ExelElement exel_normalize(const Groupoid& g, std::vector<int> markers, int base) {
  std::sort(markers.begin(), markers.end());
  markers.erase(std::unique(markers.begin(), markers.end()), markers.end());
  std::vector<int> keep;
  for (int m : markers)
    if (!g.is_identity(m) && m != base) keep.push_back(m);
  return ExelElement{std::move(keep), base};
}

/// The product rule (A,g)(B,h) = normalize(A ∪ gB ∪ {g}, gh), which is what
/// the relations [u][v] = eps_u [uv] and [g] eps_h = eps_{gh} [g] force.
/// Undefined unless d(g) = r(h).
inline std::optional<ExelElement> exel_mul(const Groupoid& g, const ExelElement& x, const ExelElement& y) {
  if (g.d(x.base) != g.r(y.base)) return std::nullopt;
  std::vector<int> markers = x.markers;
  for (int b : y.markers) markers.push_back(g.compose(x.base, b));
  markers.push_back(x.base);
  return exel_normalize(g, std::move(markers), g.compose(x.base, y.base));
}

inline ExelElement exel_star(const Groupoid& g, const ExelElement& x) {
  std::vector<int> markers;
  int binv = g.inv(x.base);
  for (int a : x.markers) markers.push_back(g.compose(binv, a));
  markers.push_back(binv);
  return exel_normalize(g, std::move(markers), binv);
}

inline std::string exel_label(const Groupoid& g, const ExelElement& x) {
  std::string out;
  for (int m : x.markers) out += "e_" + g.label(m) + ".";
  out += "[" + g.label(x.base) + "]";
  return out;
}

/// Every standard form directly: for each base arrow all marker subsets of
/// X_{r(g)} minus identities and the base.
inline std::vector<ExelElement> enumerate_standard_forms(const Groupoid& g) {
  require_valid(g);
  std::vector<ExelElement> out;
  for (int base = 0; base < g.size(); ++base) {
    std::vector<int> pool;
    for (int h = 0; h < g.size(); ++h)
      if (g.r(h) == g.r(base) && !g.is_identity(h) && h != base) pool.push_back(h);
    if (pool.size() > 20) throw CapacityError("standard-form enumeration capped");
    for (size_t mask = 0; mask < (size_t{1} << pool.size()); ++mask) {
      std::vector<int> markers;
      for (size_t i = 0; i < pool.size(); ++i)
        if (mask & (size_t{1} << i)) markers.push_back(pool[i]);
      out.push_back(exel_normalize(g, std::move(markers), base));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Work-queue closure of the generators [x] under the product rule.
inline std::vector<ExelElement> closure_from_generators(const Groupoid& g) {
  require_valid(g);
  std::set<ExelElement> seen;
  std::deque<ExelElement> queue;
  for (int x = 0; x < g.size(); ++x) {
    ExelElement gen{{}, x};
    if (seen.insert(gen).second) queue.push_back(gen);
  }
  while (!queue.empty()) {
    ExelElement cur = queue.front();
    queue.pop_front();
    std::vector<ExelElement> snapshot(seen.begin(), seen.end());
    for (const auto& other : snapshot) {
      for (auto prod : {exel_mul(g, cur, other), exel_mul(g, other, cur)})
        if (prod && seen.insert(*prod).second) queue.push_back(*prod);
    }
    if (seen.size() > 100000) throw CapacityError("Exel category closure exceeded 100000 elements");
  }
  return std::vector<ExelElement>(seen.begin(), seen.end());
}

struct ExelCategory {
  Groupoid G;
  std::vector<ExelElement> elems;  // sorted; index = element id
  Semigroupoid S;
  std::vector<int> gen;  // arrow -> id of [x]

  int index_of(const ExelElement& e) const {
    auto it = std::lower_bound(elems.begin(), elems.end(), e);
    if (it == elems.end() || !(*it == e)) throw std::logic_error("element missing from Exel category");
    return static_cast<int>(it - elems.begin());
  }
};

/// Builds E(G) by generator closure and cross-validates against the direct
/// standard-form enumeration; a mismatch means the derived product rule is
/// wrong for this input and is reported loudly rather than patched.
inline ExelCategory build_exel_category(const Groupoid& g) {
  std::vector<ExelElement> closed = closure_from_generators(g);
  std::vector<ExelElement> enumerated = enumerate_standard_forms(g);
  if (closed != enumerated)
    throw std::logic_error("Exel category construction mismatch: closure produced " +
                           std::to_string(closed.size()) + " elements, standard-form enumeration " +
                           std::to_string(enumerated.size()));
  ExelCategory cat;
  cat.G = g;
  cat.elems = std::move(enumerated);
  int n = static_cast<int>(cat.elems.size());

  cat.S.labels.resize(static_cast<size_t>(n));
  cat.S.prod.assign(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(n), -1));
  cat.S.inv.resize(static_cast<size_t>(n));
  cat.S.dom.resize(static_cast<size_t>(n));
  cat.S.ran.resize(static_cast<size_t>(n));
  cat.S.category = true;
  for (int i = 0; i < n; ++i) {
    const ExelElement& x = cat.elems[static_cast<size_t>(i)];
    cat.S.labels[static_cast<size_t>(i)] = exel_label(g, x);
    cat.S.inv[static_cast<size_t>(i)] = cat.index_of(exel_star(g, x));
    for (int j = 0; j < n; ++j) {
      auto prod = exel_mul(g, x, cat.elems[static_cast<size_t>(j)]);
      if (prod) cat.S.prod[static_cast<size_t>(i)][static_cast<size_t>(j)] = cat.index_of(*prod);
    }
  }
  for (int i = 0; i < n; ++i) {
    const ExelElement& x = cat.elems[static_cast<size_t>(i)];
    cat.S.dom[static_cast<size_t>(i)] = cat.index_of(ExelElement{{}, g.d(x.base)});
    cat.S.ran[static_cast<size_t>(i)] = cat.index_of(ExelElement{{}, g.r(x.base)});
  }
  for (int e : g.identities()) cat.S.identities.push_back(cat.index_of(ExelElement{{}, e}));
  cat.gen.resize(static_cast<size_t>(g.size()));
  for (int x = 0; x < g.size(); ++x) cat.gen[static_cast<size_t>(x)] = cat.index_of(ExelElement{{}, x});
  return cat;
}

/// Partial-homomorphism conditions for a total map f from the arrows of G
/// into a semigroupoid.
inline AxiomReport check_partial_hom(const Groupoid& g, const Semigroupoid& s, const std::vector<int>& f) {
  Stopwatch clock;
  require_valid(g);
  if (static_cast<int>(f.size()) != g.size()) throw SchemaError("partial homomorphism map must cover every arrow");
  AxiomReport rep;
  rep.subject = "partial homomorphism";
  auto L = [&](int i) { return g.label(i); };
  auto fm = [&](int x) { return f[static_cast<size_t>(x)]; };

  auto& exists = rep.add("exists-implication");
  auto& rel = rep.add("partial-hom-relations");
  for (auto [x, y] : g.composable_pairs()) {
    ++exists.checked;
    if (!s.composable(fm(x), fm(y))) {
      exists.fail({{L(x), L(y)}, "f(x) f(y) undefined"});
      continue;
    }
    ++rel.checked;
    int xi = g.inv(x), yi = g.inv(y), xy = g.compose(x, y);
    // f(x^-1) f(x) f(y) = f(x^-1) f(xy)
    auto chain3 = [&](int a, int b, int c) -> int {
      int ab = s.mul(a, b);
      return ab < 0 ? -1 : s.mul(ab, c);
    };
    int lhs1 = chain3(fm(xi), fm(x), fm(y));
    int rhs1 = s.mul(fm(xi), fm(xy));
    if (lhs1 < 0 || rhs1 < 0 || lhs1 != rhs1)
      rel.fail({{L(x), L(y)}, "f(x^-1) f(x) f(y) != f(x^-1) f(xy)"});
    int lhs2 = chain3(fm(x), fm(y), fm(yi));
    int rhs2 = s.mul(fm(xy), fm(yi));
    if (lhs2 < 0 || rhs2 < 0 || lhs2 != rhs2)
      rel.fail({{L(x), L(y)}, "f(x) f(y) f(y^-1) != f(xy) f(y^-1)"});
  }

  rep.wall_ms = clock.ms();
  return rep;
}

/// Principal two-sided ideal generated by one element.
inline std::vector<int> principal_ideal(const Semigroupoid& s, int x) {
  std::set<int> in{x};
  std::deque<int> queue{x};
  while (!queue.empty()) {
    int y = queue.front();
    queue.pop_front();
    for (int z = 0; z < s.size(); ++z) {
      for (int p : {s.mul(z, y), s.mul(y, z)})
        if (p >= 0 && in.insert(p).second) queue.push_back(p);
    }
  }
  return std::vector<int>(in.begin(), in.end());
}

/// All two-sided ideals (including the empty one).  Every ideal is a union
/// of principal ideals and every such union is an ideal, so the lattice is
/// generated by unions of the distinct principal ideals.
inline std::vector<std::vector<int>> semigroupoid_ideals(const Semigroupoid& s, size_t cap = 1u << 20) {
  std::set<std::vector<int>> principals;
  for (int x = 0; x < s.size(); ++x) principals.insert(principal_ideal(s, x));
  std::vector<std::vector<int>> gens(principals.begin(), principals.end());
  if (gens.size() > 20) throw CapacityError("too many distinct principal ideals for union enumeration");
  std::set<std::vector<int>> out;
  size_t count = size_t{1} << gens.size();
  if (count > cap) throw CapacityError("ideal lattice enumeration over capacity");
  for (size_t mask = 0; mask < count; ++mask) {
    std::set<int> u;
    for (size_t i = 0; i < gens.size(); ++i)
      if (mask & (size_t{1} << i)) u.insert(gens[i].begin(), gens[i].end());
    out.insert(std::vector<int>(u.begin(), u.end()));
  }
  std::vector<std::vector<int>> result(out.begin(), out.end());
  std::sort(result.begin(), result.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return result;
}

}  // namespace partact
