#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "partact/matrix.hpp"

namespace partact {

/// Associative (not necessarily unital) algebra given by sparse structure
/// constants e_i e_j = sum_k c[i][j][k] e_k over an exact field.
/// Associativity is checked on all basis triples at construction unless the
/// construction itself guarantees it (direct powers, closed subalgebras).
template <class K>
class Algebra {
 public:
  using Elem = typename K::Elem;
  using Term = std::pair<int, Elem>;

  static std::shared_ptr<const Algebra> split(K f, int n) {
    if (n < 1) throw ArgumentError("split algebra needs dimension >= 1");
    Algebra a(f, n);
    for (int i = 0; i < n; ++i) {
      a._labels[static_cast<size_t>(i)] = "e" + std::to_string(i + 1);
      a._c[static_cast<size_t>(i)][static_cast<size_t>(i)] = {{i, f.one()}};
    }
    return finish(std::move(a), /*check=*/true);
  }

  /// table[i][j] is the dense coefficient vector of e_i e_j.
  static std::shared_ptr<const Algebra> from_table(K f, std::vector<std::string> labels,
                                                   const std::vector<std::vector<Vec<K>>>& table,
                                                   bool check = true) {
    int n = static_cast<int>(labels.size());
    Algebra a(f, n);
    a._labels = std::move(labels);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const Vec<K>& v = table[static_cast<size_t>(i)][static_cast<size_t>(j)];
        if (static_cast<int>(v.size()) != n) throw SchemaError("structure constant row has wrong length");
        for (int k = 0; k < n; ++k)
          if (!v[static_cast<size_t>(k)].is_zero())
            a._c[static_cast<size_t>(i)][static_cast<size_t>(j)].push_back({k, v[static_cast<size_t>(k)]});
      }
    return finish(std::move(a), check);
  }

  /// Coordinatewise power base^m; associativity inherited, not rechecked.
  static std::shared_ptr<const Algebra> direct_power(const Algebra& base, int m,
                                                     const std::vector<std::string>& coord_names) {
    int n = base.dim() * m;
    Algebra a(base._f, n);
    for (int c = 0; c < m; ++c)
      for (int i = 0; i < base.dim(); ++i)
        a._labels[static_cast<size_t>(c * base.dim() + i)] =
            coord_names[static_cast<size_t>(c)] + ":" + base.label(i);
    for (int c = 0; c < m; ++c)
      for (int i = 0; i < base.dim(); ++i)
        for (int j = 0; j < base.dim(); ++j) {
          auto& cell = a._c[static_cast<size_t>(c * base.dim() + i)][static_cast<size_t>(c * base.dim() + j)];
          for (auto& [k, v] : base._c[static_cast<size_t>(i)][static_cast<size_t>(j)])
            cell.push_back({c * base.dim() + k, v});
        }
    return finish(std::move(a), /*check=*/false);
  }

  const K& field() const { return _f; }
  int dim() const { return _n; }
  const std::string& label(int i) const { return _labels[static_cast<size_t>(i)]; }
  const std::vector<std::string>& labels() const { return _labels; }

  int find_label(const std::string& name) const {
    for (size_t i = 0; i < _labels.size(); ++i)
      if (_labels[i] == name) return static_cast<int>(i);
    return -1;
  }

  Vec<K> zero() const { return zero_vec(_f, _n); }

  Vec<K> basis_vec(int i) const {
    Vec<K> v = zero();
    v[static_cast<size_t>(i)] = _f.one();
    return v;
  }

  Vec<K> mul(const Vec<K>& x, const Vec<K>& y) const {
    Vec<K> out = zero();
    for (int i = 0; i < _n; ++i) {
      const Elem& xi = x[static_cast<size_t>(i)];
      if (xi.is_zero()) continue;
      for (int j = 0; j < _n; ++j) {
        const Elem& yj = y[static_cast<size_t>(j)];
        if (yj.is_zero()) continue;
        Elem s = xi * yj;
        for (auto& [k, v] : _c[static_cast<size_t>(i)][static_cast<size_t>(j)]) out[static_cast<size_t>(k)] += s * v;
      }
    }
    return out;
  }

  bool is_associative(Witness* w = nullptr) const {
    for (int i = 0; i < _n; ++i)
      for (int j = 0; j < _n; ++j) {
        Vec<K> ij = mul(basis_vec(i), basis_vec(j));
        for (int k = 0; k < _n; ++k) {
          Vec<K> lhs = mul(ij, basis_vec(k));
          Vec<K> rhs = mul(basis_vec(i), mul(basis_vec(j), basis_vec(k)));
          if (lhs != rhs) {
            if (w) *w = Witness{{label(i), label(j), label(k)}, "(ei ej)ek != ei(ej ek)"};
            return false;
          }
        }
      }
    return true;
  }

  std::string show(const Vec<K>& v) const {
    std::string out;
    for (int i = 0; i < _n; ++i) {
      const Elem& c = v[static_cast<size_t>(i)];
      if (c.is_zero()) continue;
      if (!out.empty()) out += " + ";
      if (c.is_one())
        out += label(i);
      else
        out += _f.display(c) + "*" + label(i);
    }
    return out.empty() ? "0" : out;
  }

  bool same_as(const Algebra& o) const {
    return this == &o || (_n == o._n && _c == o._c);
  }

 private:
  Algebra(K f, int n)
      : _f(f),
        _n(n),
        _labels(static_cast<size_t>(n)),
        _c(static_cast<size_t>(n), std::vector<std::vector<Term>>(static_cast<size_t>(n))) {}

  static std::shared_ptr<const Algebra> finish(Algebra a, bool check) {
    if (check) {
      Witness w;
      if (!a.is_associative(&w))
        throw SchemaError("structure constants are not associative at (" + join(w.where, ",") + ")");
    }
    return std::make_shared<const Algebra>(std::move(a));
  }

  K _f;
  int _n;
  std::vector<std::string> _labels;
  std::vector<std::vector<std::vector<Term>>> _c;

 public:
  // make_shared needs it; not part of the API
  Algebra(Algebra&&) = default;
};

template <class K>
using AlgebraPtr = std::shared_ptr<const Algebra<K>>;

/// Subspace of an algebra in canonical (rref) basis form.  "Ideal" here is
/// the storage type; whether a subspace really is an ideal of some ambient
/// is a checkable predicate; the constructions stack ideals inside ideals.
template <class K>
class Ideal {
 public:
  Ideal() = default;
  Ideal(AlgebraPtr<K> ambient, Mat<K> basis_rref) : _a(std::move(ambient)), _basis(std::move(basis_rref)) {}

  static Ideal span(AlgebraPtr<K> ambient, const std::vector<Vec<K>>& gens) {
    Mat<K> m = Mat<K>::from_rows(ambient->field(), gens, ambient->dim());
    return Ideal(ambient, rref(std::move(m)));
  }
  static Ideal zero(AlgebraPtr<K> ambient) {
    return Ideal(ambient, Mat<K>(ambient->field(), 0, ambient->dim()));
  }
  static Ideal full(AlgebraPtr<K> ambient) {
    return Ideal(ambient, Mat<K>::identity(ambient->field(), ambient->dim()));
  }

  const AlgebraPtr<K>& ambient() const { return _a; }
  const Mat<K>& basis() const { return _basis; }
  int dim() const { return _basis.rows; }
  bool is_zero() const { return _basis.rows == 0; }
  Vec<K> basis_vec(int i) const { return _basis.row(i); }

  bool contains(const Vec<K>& v) const { return in_rowspace(_basis, v); }
  std::optional<Vec<K>> coords(const Vec<K>& v) const { return coords_in_rowspace(_basis, v); }

  bool contains_subspace(const Ideal& other) const {
    for (int i = 0; i < other.dim(); ++i)
      if (!contains(other.basis_vec(i))) return false;
    return true;
  }

  /// Two-sided absorption: other * this and this * other land inside this.
  bool is_ideal_of(const Ideal& other) const {
    for (int i = 0; i < dim(); ++i)
      for (int j = 0; j < other.dim(); ++j) {
        if (!contains(_a->mul(other.basis_vec(j), basis_vec(i)))) return false;
        if (!contains(_a->mul(basis_vec(i), other.basis_vec(j)))) return false;
      }
    return true;
  }

  friend bool operator==(const Ideal& x, const Ideal& y) {
    return x._a->same_as(*y._a) && x._basis == y._basis;
  }
  friend bool operator!=(const Ideal& x, const Ideal& y) { return !(x == y); }

  Ideal sum(const Ideal& other) const { return Ideal(_a, rowspace_sum(_basis, other._basis)); }
  Ideal intersect(const Ideal& other) const { return Ideal(_a, rowspace_intersect(_basis, other._basis)); }

 private:
  AlgebraPtr<K> _a;
  Mat<K> _basis;
};

template <class K>
void require_same_ambient(const Ideal<K>& a, const Ideal<K>& b, const char* op) {
  if (!a.ambient()->same_as(*b.ambient())) throw ArgumentError(std::string(op) + ": ambient algebras differ");
}

/// Span of pairwise products of the two bases, canonicalized.
template <class K>
Ideal<K> ideal_product(const Ideal<K>& x, const Ideal<K>& y) {
  require_same_ambient(x, y, "ideal_product");
  std::vector<Vec<K>> prods;
  for (int i = 0; i < x.dim(); ++i)
    for (int j = 0; j < y.dim(); ++j) prods.push_back(x.ambient()->mul(x.basis_vec(i), y.basis_vec(j)));
  return Ideal<K>::span(x.ambient(), prods);
}

/// The unique u with ua = au = a for all a in I, when it exists.  The zero
/// ideal reports the zero element as its unit.
template <class K>
std::optional<Vec<K>> unit_of_ideal(const Ideal<K>& ideal) {
  const auto& A = *ideal.ambient();
  if (ideal.is_zero()) return A.zero();
  int k = ideal.dim(), n = A.dim();
  // unknowns: coordinates of u in the ideal basis; equations: u b_j = b_j
  // and b_j u = b_j for every basis vector b_j.
  Mat<K> sys(A.field(), k, 2 * k * n);
  Vec<K> rhs = zero_vec(A.field(), 2 * k * n);
  for (int j = 0; j < k; ++j) {
    Vec<K> bj = ideal.basis_vec(j);
    for (int i = 0; i < k; ++i) {
      Vec<K> left = A.mul(ideal.basis_vec(i), bj);
      Vec<K> right = A.mul(bj, ideal.basis_vec(i));
      for (int c = 0; c < n; ++c) {
        sys.at(i, j * n + c) = left[static_cast<size_t>(c)];
        sys.at(i, (k + j) * n + c) = right[static_cast<size_t>(c)];
      }
    }
    for (int c = 0; c < n; ++c) {
      rhs[static_cast<size_t>(j * n + c)] = bj[static_cast<size_t>(c)];
      rhs[static_cast<size_t>((k + j) * n + c)] = bj[static_cast<size_t>(c)];
    }
  }
  auto sol = solve_left(sys, rhs);
  if (!sol) return std::nullopt;
  return row_apply<K>(*sol, ideal.basis());
}

/// Inverse of a inside the unital ideal I (ab = ba = 1_I), or nullopt.  In
/// the zero ideal, 0 is its own inverse.
template <class K>
std::optional<Vec<K>> invert_in_ideal(const Vec<K>& a, const Ideal<K>& ideal) {
  const auto& A = *ideal.ambient();
  if (!ideal.contains(a)) throw ArgumentError("invert_in_ideal: element lies outside the ideal");
  if (ideal.is_zero()) return A.zero();
  auto unit = unit_of_ideal(ideal);
  if (!unit) return std::nullopt;
  int k = ideal.dim(), n = A.dim();
  Mat<K> sys(A.field(), k, 2 * n);
  Vec<K> rhs = zero_vec(A.field(), 2 * n);
  for (int i = 0; i < k; ++i) {
    Vec<K> left = A.mul(ideal.basis_vec(i), a);
    Vec<K> right = A.mul(a, ideal.basis_vec(i));
    for (int c = 0; c < n; ++c) {
      sys.at(i, c) = left[static_cast<size_t>(c)];
      sys.at(i, n + c) = right[static_cast<size_t>(c)];
    }
  }
  for (int c = 0; c < n; ++c) {
    rhs[static_cast<size_t>(c)] = (*unit)[static_cast<size_t>(c)];
    rhs[static_cast<size_t>(n + c)] = (*unit)[static_cast<size_t>(c)];
  }
  auto sol = solve_left(sys, rhs);
  if (!sol) return std::nullopt;
  return row_apply<K>(*sol, ideal.basis());
}

/// Smallest subspace containing gens and closed under multiplication.
template <class K>
Ideal<K> subring_closure(const std::vector<Vec<K>>& gens, AlgebraPtr<K> ambient) {
  if (gens.empty()) throw ArgumentError("subring_closure needs at least one generator");
  Ideal<K> cur = Ideal<K>::span(ambient, gens);
  for (int round = 0; round <= ambient->dim(); ++round) {
    std::vector<Vec<K>> next;
    for (int i = 0; i < cur.dim(); ++i) next.push_back(cur.basis_vec(i));
    for (int i = 0; i < cur.dim(); ++i)
      for (int j = 0; j < cur.dim(); ++j) next.push_back(ambient->mul(cur.basis_vec(i), cur.basis_vec(j)));
    Ideal<K> grown = Ideal<K>::span(ambient, next);
    if (grown.dim() == cur.dim()) return grown;
    cur = grown;
  }
  throw std::logic_error("subring closure failed to stabilize");
}

/// Linear map between subspaces, stored as the images of the domain's
/// canonical basis in the codomain's ambient coordinates.  Domain and
/// codomain may live in different algebras (the globalization embeddings
/// phi_e map D_e into the function space).
template <class K>
class LinearMap {
 public:
  LinearMap() = default;
  LinearMap(Ideal<K> dom, Ideal<K> cod, Mat<K> images) : _dom(std::move(dom)), _cod(std::move(cod)), _img(std::move(images)) {
    if (_img.rows != _dom.dim() || _img.cols != _cod.ambient()->dim())
      throw ArgumentError("linear map image matrix has wrong shape");
  }

  static LinearMap identity(const Ideal<K>& on) { return LinearMap(on, on, on.basis()); }

  /// Map determined by v_i -> w_i extended linearly; the v_i must span dom.
  static LinearMap from_pairs(const Ideal<K>& dom, const Ideal<K>& cod,
                              const std::vector<std::pair<Vec<K>, Vec<K>>>& pairs) {
    Mat<K> v = Mat<K>(dom.ambient()->field(), static_cast<int>(pairs.size()), dom.ambient()->dim());
    for (size_t i = 0; i < pairs.size(); ++i) v.set_row(static_cast<int>(i), pairs[i].first);
    Mat<K> img(dom.ambient()->field(), dom.dim(), cod.ambient()->dim());
    Mat<K> vr = v;
    // express each canonical basis vector of dom through the given v_i
    for (int b = 0; b < dom.dim(); ++b) {
      auto sol = solve_left(vr, dom.basis_vec(b));
      if (!sol) throw SchemaError("map data does not span its declared domain");
      Vec<K> out = zero_vec(cod.ambient()->field(), cod.ambient()->dim());
      for (size_t i = 0; i < pairs.size(); ++i) {
        const auto& c = (*sol)[i];
        if (c.is_zero()) continue;
        for (size_t j = 0; j < out.size(); ++j) out[j] += c * pairs[i].second[j];
      }
      // consistency: the data must define a single-valued linear map
      img.set_row(b, out);
    }
    LinearMap m(dom, cod, img);
    for (auto& [x, y] : pairs)
      if (m.apply(x) != y) throw SchemaError("map data is not linear (inconsistent images)");
    return m;
  }

  const Ideal<K>& domain() const { return _dom; }
  const Ideal<K>& codomain() const { return _cod; }
  const Mat<K>& images() const { return _img; }

  Vec<K> apply(const Vec<K>& x) const {
    auto c = _dom.coords(x);
    if (!c) throw ArgumentError("linear map applied outside its domain");
    return row_apply<K>(*c, _img);
  }

  Ideal<K> image_ideal() const { return Ideal<K>(_cod.ambient(), rref(_img)); }

  Ideal<K> image_of(const Ideal<K>& sub) const {
    std::vector<Vec<K>> rows;
    for (int i = 0; i < sub.dim(); ++i) rows.push_back(apply(sub.basis_vec(i)));
    return Ideal<K>::span(_cod.ambient(), rows);
  }

  bool is_bijection_onto_codomain() const {
    Mat<K> img = rref(_img);
    return img.rows == _dom.dim() && Ideal<K>(_cod.ambient(), img) == _cod;
  }

  LinearMap inverse() const {
    if (!is_bijection_onto_codomain()) throw ArgumentError("linear map is not invertible onto its codomain");
    std::vector<std::pair<Vec<K>, Vec<K>>> rev;
    for (int i = 0; i < _dom.dim(); ++i) rev.push_back({_img.row(i), _dom.basis_vec(i)});
    return from_pairs(_cod, _dom, rev);
  }

  bool is_multiplicative(Witness* w = nullptr) const {
    const auto& domA = *_dom.ambient();
    const auto& codA = *_cod.ambient();
    for (int i = 0; i < _dom.dim(); ++i)
      for (int j = 0; j < _dom.dim(); ++j) {
        Vec<K> prod = domA.mul(_dom.basis_vec(i), _dom.basis_vec(j));
        Vec<K> lhs = apply(prod);
        Vec<K> rhs = codA.mul(apply(_dom.basis_vec(i)), apply(_dom.basis_vec(j)));
        if (lhs != rhs) {
          if (w) *w = Witness{{std::to_string(i), std::to_string(j)}, "phi(ab) != phi(a)phi(b)"};
          return false;
        }
      }
    return true;
  }

  LinearMap then(const LinearMap& g) const {
    Mat<K> img(_dom.ambient()->field(), _dom.dim(), g._cod.ambient()->dim());
    for (int i = 0; i < _dom.dim(); ++i) img.set_row(i, g.apply(_img.row(i)));
    return LinearMap(_dom, g._cod, img);
  }

 private:
  Ideal<K> _dom;
  Ideal<K> _cod;
  Mat<K> _img;
};

/// Carve a closed subspace out as its own Algebra, keeping converters.
template <class K>
struct SubalgebraView {
  AlgebraPtr<K> parent;
  AlgebraPtr<K> sub;
  Mat<K> rows;  // sub basis in parent coordinates

  Vec<K> to_parent(const Vec<K>& v) const { return row_apply<K>(v, rows); }
  Vec<K> to_sub(const Vec<K>& v) const {
    auto c = coords_in_rowspace(rows, v);
    if (!c) throw ArgumentError("vector lies outside the subalgebra");
    return *c;
  }
  Ideal<K> lift(const Ideal<K>& in_parent) const {
    std::vector<Vec<K>> rs;
    for (int i = 0; i < in_parent.dim(); ++i) rs.push_back(to_sub(in_parent.basis_vec(i)));
    return Ideal<K>::span(sub, rs);
  }
};

template <class K>
SubalgebraView<K> materialize_subalgebra(AlgebraPtr<K> parent, const Ideal<K>& subspace,
                                         const std::string& label_prefix) {
  Mat<K> rows = subspace.basis();
  int k = rows.rows;
  std::vector<std::string> labels(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) {
    // reuse the parent label when the basis row is a plain basis vector
    int hits = 0, where = -1;
    for (int c = 0; c < rows.cols; ++c)
      if (!rows.at(i, c).is_zero()) {
        ++hits;
        where = c;
      }
    if (hits == 1 && rows.at(i, where).is_one())
      labels[static_cast<size_t>(i)] = parent->label(where);
    else
      labels[static_cast<size_t>(i)] = label_prefix + std::to_string(i);
  }
  std::vector<std::vector<Vec<K>>> table(static_cast<size_t>(k), std::vector<Vec<K>>(static_cast<size_t>(k)));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      Vec<K> prod = parent->mul(rows.row(i), rows.row(j));
      auto c = coords_in_rowspace(rows, prod);
      if (!c) throw ArgumentError("subspace is not multiplicatively closed");
      table[static_cast<size_t>(i)][static_cast<size_t>(j)] = *c;
    }
  SubalgebraView<K> view;
  view.parent = parent;
  view.sub = Algebra<K>::from_table(parent->field(), std::move(labels), table, /*check=*/k <= 32);
  view.rows = rows;
  return view;
}

}  // namespace partact
