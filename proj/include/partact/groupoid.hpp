#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "partact/common.hpp"

namespace partact {

/// Finite groupoid on dense integer arrow ids.  The input-file order of the
/// arrows is the global tie-break for every basis ordering downstream.
/// Identities and the d/r maps are derived from the compose/inverse tables;
/// verify_groupoid is the axiom gate and never throws on a broken table.
class Groupoid {
 public:
  Groupoid() = default;

  static Groupoid from_tables(std::vector<std::string> labels,
                              const std::vector<std::array<int, 3>>& compose_triples,
                              const std::vector<std::pair<int, int>>& inverse_pairs) {
    Groupoid g;
    g._labels = std::move(labels);
    int n = static_cast<int>(g._labels.size());
    if (n == 0) throw SchemaError("groupoid must have at least one arrow");
    g._compose.assign(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(n), -1));
    g._inv.assign(static_cast<size_t>(n), -1);
    for (auto& t : compose_triples) {
      for (int v : t)
        if (v < 0 || v >= n) throw SchemaError("composition entry references arrow out of range");
      int& cell = g._compose[static_cast<size_t>(t[0])][static_cast<size_t>(t[1])];
      if (cell != -1 && cell != t[2]) throw SchemaError("conflicting composition entries for one pair");
      cell = t[2];
    }
    for (auto& [x, y] : inverse_pairs) {
      if (x < 0 || x >= n || y < 0 || y >= n) throw SchemaError("inverse entry references arrow out of range");
      auto put = [&](int a, int b) {
        if (g._inv[static_cast<size_t>(a)] != -1 && g._inv[static_cast<size_t>(a)] != b)
          throw SchemaError("conflicting inverse entries for arrow " + g._labels[static_cast<size_t>(a)]);
        g._inv[static_cast<size_t>(a)] = b;
      };
      put(x, y);
      put(y, x);
    }
    for (int i = 0; i < n; ++i)
      if (g._inv[static_cast<size_t>(i)] == -1)
        throw SchemaError("no inverse declared for arrow " + g._labels[static_cast<size_t>(i)]);
    g.derive();
    return g;
  }

  int size() const { return static_cast<int>(this->_labels.size()); }
  const std::vector<std::string>& labels() const { return _labels; }
  const std::string& label(int i) const { return _labels[static_cast<size_t>(i)]; }

  int find(const std::string& name) const {
    for (size_t i = 0; i < _labels.size(); ++i)
      if (_labels[i] == name) return static_cast<int>(i);
    return -1;
  }

  /// -1 when the product is undefined.
  int compose(int x, int y) const { return _compose[static_cast<size_t>(x)][static_cast<size_t>(y)]; }
  bool composable(int x, int y) const { return compose(x, y) >= 0; }
  int inv(int x) const { return _inv[static_cast<size_t>(x)]; }

  /// Derived data; -1 where underivable from a broken table.
  int d(int x) const { return _d[static_cast<size_t>(x)]; }
  int r(int x) const { return _r[static_cast<size_t>(x)]; }
  bool is_identity(int x) const { return _is_identity[static_cast<size_t>(x)]; }
  const std::vector<int>& identities() const { return _identities; }

  std::vector<std::pair<int, int>> composable_pairs() const {
    std::vector<std::pair<int, int>> out;
    for (int x = 0; x < size(); ++x)
      for (int y = 0; y < size(); ++y)
        if (composable(x, y)) out.emplace_back(x, y);
    return out;
  }

  // raw table access for the verifier
  const std::vector<std::vector<int>>& compose_table() const { return _compose; }

  friend bool operator==(const Groupoid& a, const Groupoid& b) {
    return a._labels == b._labels && a._compose == b._compose && a._inv == b._inv;
  }

  // -- test/builder helpers ------------------------------------------------

  /// One arrow e with e*e = e.
  static Groupoid trivial() { return from_tables({"e"}, {{0, 0, 0}}, {{0, 0}}); }

  static Groupoid cyclic_group(int n, const std::string& prefix = "c") {
    std::vector<std::string> labels;
    std::vector<std::array<int, 3>> mul;
    std::vector<std::pair<int, int>> inv;
    for (int i = 0; i < n; ++i) labels.push_back(prefix + std::to_string(i));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) mul.push_back({i, j, (i + j) % n});
      inv.emplace_back(i, (n - i) % n);
    }
    return from_tables(std::move(labels), mul, inv);
  }

  /// Pair groupoid on k objects: arrows (i<-j) with (i<-j)(j<-l) = (i<-l).
  /// k = 2 is the four-arrow groupoid { g, g^-1, r(g), d(g) }.
  static Groupoid pair_groupoid(int k, const std::string& prefix = "a") {
    auto id = [k](int i, int j) { return i * k + j; };
    std::vector<std::string> labels(static_cast<size_t>(k) * k);
    std::vector<std::array<int, 3>> mul;
    std::vector<std::pair<int, int>> inv;
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        labels[static_cast<size_t>(id(i, j))] = prefix + std::to_string(i) + std::to_string(j);
        inv.emplace_back(id(i, j), id(j, i));
        for (int l = 0; l < k; ++l) mul.push_back({id(i, j), id(j, l), id(i, l)});
      }
    return from_tables(std::move(labels), mul, inv);
  }

  static Groupoid disjoint_union(const Groupoid& a, const Groupoid& b) {
    std::vector<std::string> labels;
    std::vector<std::array<int, 3>> mul;
    std::vector<std::pair<int, int>> inv;
    for (auto& l : a._labels) labels.push_back("L." + l);
    for (auto& l : b._labels) labels.push_back("R." + l);
    int off = a.size();
    for (int x = 0; x < a.size(); ++x) {
      inv.emplace_back(x, a.inv(x));
      for (int y = 0; y < a.size(); ++y)
        if (a.composable(x, y)) mul.push_back({x, y, a.compose(x, y)});
    }
    for (int x = 0; x < b.size(); ++x) {
      inv.emplace_back(off + x, off + b.inv(x));
      for (int y = 0; y < b.size(); ++y)
        if (b.composable(x, y)) mul.push_back({off + x, off + y, off + b.compose(x, y)});
    }
    return from_tables(std::move(labels), mul, inv);
  }

 private:
  void derive() {
    int n = size();
    _d.assign(static_cast<size_t>(n), -1);
    _r.assign(static_cast<size_t>(n), -1);
    _is_identity.assign(static_cast<size_t>(n), false);
    for (int x = 0; x < n; ++x) {
      _d[static_cast<size_t>(x)] = compose(inv(x), x);
      _r[static_cast<size_t>(x)] = compose(x, inv(x));
    }
    std::set<int> ids;
    for (int x = 0; x < n; ++x) {
      if (_d[static_cast<size_t>(x)] >= 0) ids.insert(_d[static_cast<size_t>(x)]);
      if (_r[static_cast<size_t>(x)] >= 0) ids.insert(_r[static_cast<size_t>(x)]);
    }
    _identities.assign(ids.begin(), ids.end());
    for (int e : _identities) _is_identity[static_cast<size_t>(e)] = true;
  }

  std::vector<std::string> _labels;
  std::vector<std::vector<int>> _compose;
  std::vector<int> _inv;
  std::vector<int> _d, _r;
  std::vector<bool> _is_identity;
  std::vector<int> _identities;
};

inline AxiomReport verify_groupoid(const Groupoid& g) {
  Stopwatch clock;
  AxiomReport rep;
  rep.subject = "groupoid";
  int n = g.size();
  auto L = [&](int i) { return g.label(i); };

  auto& inv_check = rep.add("inverse-involution");
  for (int x = 0; x < n; ++x) {
    ++inv_check.checked;
    if (g.inv(g.inv(x)) != x) inv_check.fail({{L(x)}, "inv(inv(x)) != x"});
  }

  // d(g) = g^-1 g and r(g) = g g^-1 must exist before anything else makes
  // sense; report the missing products as axiom failures, not exceptions.
  auto& dr_check = rep.add("inverse-composition");
  for (int x = 0; x < n; ++x) {
    ++dr_check.checked;
    if (g.d(x) < 0) dr_check.fail({{L(x)}, "product inv(x)*x undefined, d(x) underivable"});
    if (g.r(x) < 0) dr_check.fail({{L(x)}, "product x*inv(x) undefined, r(x) underivable"});
    if (g.d(x) >= 0 && g.inv(x) >= 0 && g.r(g.inv(x)) >= 0 && g.d(x) != g.r(g.inv(x)))
      dr_check.fail({{L(x)}, "d(x) != r(inv(x))"});
  }

  auto& exists_iff = rep.add("exists-iff-d-equals-r");
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      ++exists_iff.checked;
      bool defined = g.composable(x, y);
      bool should = g.d(x) >= 0 && g.d(x) == g.r(y);
      if (defined != should)
        exists_iff.fail({{L(x), L(y)}, defined ? "product defined but d(x) != r(y)" : "d(x) = r(y) but product undefined"});
    }

  auto& assoc = rep.add("associativity");
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      int xy = g.compose(x, y);
      for (int z = 0; z < n; ++z) {
        int yz = g.compose(y, z);
        bool lhs_def = xy >= 0 && g.compose(xy, z) >= 0;
        bool rhs_def = yz >= 0 && g.compose(x, yz) >= 0;
        if (!lhs_def && !rhs_def) continue;
        ++assoc.checked;
        if (lhs_def != rhs_def)
          assoc.fail({{L(x), L(y), L(z)}, "one association defined, the other not"});
        else if (g.compose(xy, z) != g.compose(x, yz))
          assoc.fail({{L(x), L(y), L(z)}, "(xy)z != x(yz)"});
      }
    }

  auto& ident = rep.add("local-identities");
  for (int x = 0; x < n; ++x) {
    ++ident.checked;
    int rx = g.r(x), dx = g.d(x);
    if (rx >= 0 && g.compose(rx, x) != x) ident.fail({{L(x)}, "r(x)*x != x"});
    if (dx >= 0 && g.compose(x, dx) != x) ident.fail({{L(x)}, "x*d(x) != x"});
  }

  auto& idem = rep.add("identity-laws");
  for (int e : g.identities()) {
    ++idem.checked;
    if (g.compose(e, e) != e) idem.fail({{L(e)}, "e*e != e"});
    if (g.inv(e) != e) idem.fail({{L(e)}, "inv(e) != e"});
  }

  // consequences d(xy) = d(y), r(xy) = r(x); cheap cross-checks
  auto& conseq = rep.add("d-r-of-products");
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      int xy = g.compose(x, y);
      if (xy < 0) continue;
      ++conseq.checked;
      if (g.d(xy) != g.d(y) || g.r(xy) != g.r(x)) conseq.fail({{L(x), L(y)}, "d(xy) != d(y) or r(xy) != r(x)"});
    }

  rep.wall_ms = clock.ms();
  return rep;
}

inline void require_valid(const Groupoid& g) {
  AxiomReport rep = verify_groupoid(g);
  if (!rep.passed()) {
    for (auto& c : rep.checks)
      if (!c.pass) {
        std::string w = c.witnesses.empty() ? "" : " at (" + join(c.witnesses[0].where, ",") + ")";
        throw ArgumentError("groupoid axiom '" + c.name + "' fails" + w);
      }
  }
}

/// Exactly the tuples (x1,...,xn) with x1 x2 ... xn defined, in
/// lexicographic order of the arrow ids.
inline std::vector<std::vector<int>> composable_tuples(const Groupoid& g, int n) {
  if (n < 2) throw ArgumentError("composable_tuples needs n >= 2");
  std::vector<std::vector<int>> out;
  std::vector<int> cur(static_cast<size_t>(n), 0);
  auto rec = [&](auto&& self, int pos) -> void {
    if (pos == n) {
      out.push_back(cur);
      return;
    }
    for (int x = 0; x < g.size(); ++x) {
      if (pos > 0 && g.d(cur[static_cast<size_t>(pos - 1)]) != g.r(x)) continue;
      cur[static_cast<size_t>(pos)] = x;
      self(self, pos + 1);
    }
  };
  rec(rec, 0);
  return out;
}

namespace detail {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<size_t>(n)) {
    for (int i = 0; i < n; ++i) parent[static_cast<size_t>(i)] = i;
  }
  int find(int x) {
    while (parent[static_cast<size_t>(x)] != x) {
      parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
      x = parent[static_cast<size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) { parent[static_cast<size_t>(find(a))] = find(b); }
};

}  // namespace detail

/// All two-sided ideals of a verified groupoid.  For a groupoid these are
/// exactly the unions of connected components; each union is still verified
/// against the raw ideal condition before being emitted.
inline std::vector<std::vector<int>> groupoid_ideals(const Groupoid& g) {
  if (g.size() > 64) throw CapacityError("groupoid_ideals capped at 64 arrows");
  require_valid(g);
  detail::UnionFind uf(g.size());
  for (int x = 0; x < g.size(); ++x) {
    uf.unite(x, g.d(x));
    uf.unite(x, g.r(x));
  }
  std::map<int, std::vector<int>> comps;
  for (int x = 0; x < g.size(); ++x) comps[uf.find(x)].push_back(x);
  std::vector<std::vector<int>> comp_list;
  for (auto& [root, arrows] : comps) comp_list.push_back(arrows);
  size_t c = comp_list.size();
  if (c > 20) throw CapacityError("too many connected components for ideal enumeration");

  auto is_ideal = [&](const std::vector<bool>& in) {
    for (int y = 0; y < g.size(); ++y) {
      if (!in[static_cast<size_t>(y)]) continue;
      for (int x = 0; x < g.size(); ++x) {
        int xy = g.compose(x, y);
        if (xy >= 0 && !in[static_cast<size_t>(xy)]) return false;
        int yx = g.compose(y, x);
        if (yx >= 0 && !in[static_cast<size_t>(yx)]) return false;
      }
    }
    return true;
  };

  std::vector<std::vector<int>> out;
  for (size_t mask = 0; mask < (size_t{1} << c); ++mask) {
    std::vector<bool> in(static_cast<size_t>(g.size()), false);
    std::vector<int> ideal;
    for (size_t i = 0; i < c; ++i)
      if (mask & (size_t{1} << i))
        for (int x : comp_list[i]) {
          in[static_cast<size_t>(x)] = true;
          ideal.push_back(x);
        }
    std::sort(ideal.begin(), ideal.end());
    if (!is_ideal(in)) throw std::logic_error("component union failed the ideal condition");
    out.push_back(std::move(ideal));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return out;
}

}  // namespace partact
