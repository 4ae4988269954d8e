#pragma once

#include <optional>
#include <vector>

#include "partact/scalar.hpp"

namespace partact {

template <class K>
using Vec = std::vector<typename K::Elem>;

template <class K>
Vec<K> zero_vec(const K& f, int n) {
  return Vec<K>(static_cast<size_t>(n), f.zero());
}

template <class K>
bool is_zero_vec(const Vec<K>& v) {
  for (auto& x : v)
    if (!x.is_zero()) return false;
  return true;
}

template <class K>
Vec<K> vec_add(const Vec<K>& a, const Vec<K>& b) {
  Vec<K> out = a;
  for (size_t i = 0; i < out.size(); ++i) out[i] += b[i];
  return out;
}

template <class K>
Vec<K> vec_sub(const Vec<K>& a, const Vec<K>& b) {
  Vec<K> out = a;
  for (size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
  return out;
}

template <class K>
Vec<K> vec_scale(const typename K::Elem& c, const Vec<K>& a) {
  Vec<K> out = a;
  for (auto& x : out) x *= c;
  return out;
}

/// Dense row-major matrix over an exact field.  Rows double as subspace
/// bases throughout the library; `rref` is the canonical form that makes
/// subspace equality a literal comparison.
template <class K>
struct Mat {
  using Elem = typename K::Elem;

  K f;
  int rows = 0;
  int cols = 0;
  std::vector<Elem> a;

  Mat() = default;
  Mat(K field, int r, int c) : f(field), rows(r), cols(c), a(static_cast<size_t>(r) * c, field.zero()) {}

  Elem& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
  const Elem& at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }

  Vec<K> row(int r) const {
    return Vec<K>(a.begin() + static_cast<size_t>(r) * cols, a.begin() + static_cast<size_t>(r + 1) * cols);
  }
  void set_row(int r, const Vec<K>& v) {
    for (int c = 0; c < cols; ++c) at(r, c) = v[static_cast<size_t>(c)];
  }

  static Mat identity(K field, int n) {
    Mat m(field, n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = field.one();
    return m;
  }

  static Mat from_rows(K field, const std::vector<Vec<K>>& rs, int ncols) {
    Mat m(field, static_cast<int>(rs.size()), ncols);
    for (size_t r = 0; r < rs.size(); ++r) m.set_row(static_cast<int>(r), rs[r]);
    return m;
  }

  friend bool operator==(const Mat& x, const Mat& y) {
    return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
  }
  friend bool operator!=(const Mat& x, const Mat& y) { return !(x == y); }

  friend Mat operator*(const Mat& x, const Mat& y) {
    if (x.cols != y.rows) throw ArgumentError("matrix shape mismatch in product");
    Mat out(x.f, x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
      for (int k = 0; k < x.cols; ++k) {
        const Elem& xv = x.at(i, k);
        if (xv.is_zero()) continue;
        for (int j = 0; j < y.cols; ++j) {
          const Elem& yv = y.at(k, j);
          if (!yv.is_zero()) out.at(i, j) += xv * yv;
        }
      }
    return out;
  }

  bool is_zero() const {
    for (auto& x : a)
      if (!x.is_zero()) return false;
    return true;
  }
};

/// Apply a row vector on the left: out = v * M.
template <class K>
Vec<K> row_apply(const Vec<K>& v, const Mat<K>& m) {
  Vec<K> out = zero_vec(m.f, m.cols);
  for (int r = 0; r < m.rows; ++r) {
    const auto& c = v[static_cast<size_t>(r)];
    if (c.is_zero()) continue;
    for (int j = 0; j < m.cols; ++j) {
      const auto& mv = m.at(r, j);
      if (!mv.is_zero()) out[static_cast<size_t>(j)] += c * mv;
    }
  }
  return out;
}

/// In-place reduced row echelon form; returns the rank.  Zero rows are
/// dropped, pivots normalized to 1, pivot columns cleared above and below.
template <class K>
int rref_inplace(Mat<K>& m) {
  int rank = 0;
  for (int col = 0; col < m.cols && rank < m.rows; ++col) {
    int pivot = -1;
    for (int r = rank; r < m.rows; ++r)
      if (!m.at(r, col).is_zero()) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    if (pivot != rank)
      for (int c = 0; c < m.cols; ++c) std::swap(m.at(pivot, c), m.at(rank, c));
    auto inv = m.f.one() / m.at(rank, col);
    for (int c = col; c < m.cols; ++c) m.at(rank, c) *= inv;
    for (int r = 0; r < m.rows; ++r) {
      if (r == rank) continue;
      auto factor = m.at(r, col);
      if (factor.is_zero()) continue;
      for (int c = col; c < m.cols; ++c) m.at(r, c) -= factor * m.at(rank, c);
    }
    ++rank;
  }
  Mat<K> out(m.f, rank, m.cols);
  for (int r = 0; r < rank; ++r) out.set_row(r, m.row(r));
  m = out;
  return rank;
}

template <class K>
Mat<K> rref(Mat<K> m) {
  rref_inplace(m);
  return m;
}

/// Coordinates of x in the row space of an rref matrix, or nullopt if x is
/// outside it.
template <class K>
std::optional<Vec<K>> coords_in_rowspace(const Mat<K>& r, const Vec<K>& x) {
  Vec<K> rem = x;
  Vec<K> coords = zero_vec(r.f, r.rows);
  for (int i = 0; i < r.rows; ++i) {
    int p = -1;
    for (int c = 0; c < r.cols; ++c)
      if (!r.at(i, c).is_zero()) {
        p = c;
        break;
      }
    if (p < 0) continue;
    auto c = rem[static_cast<size_t>(p)];  // pivot entry is 1
    if (c.is_zero()) continue;
    coords[static_cast<size_t>(i)] = c;
    for (int j = 0; j < r.cols; ++j) rem[static_cast<size_t>(j)] -= c * r.at(i, j);
  }
  if (!is_zero_vec<K>(rem)) return std::nullopt;
  return coords;
}

template <class K>
bool in_rowspace(const Mat<K>& r, const Vec<K>& x) {
  return coords_in_rowspace(r, x).has_value();
}

/// Basis (as rref rows) of { v : v M = 0 }.
template <class K>
Mat<K> left_kernel(const Mat<K>& m) {
  // Row-reduce [M | I]; rows whose M-part vanished carry kernel vectors.
  Mat<K> aug(m.f, m.rows, m.cols + m.rows);
  for (int r = 0; r < m.rows; ++r) {
    for (int c = 0; c < m.cols; ++c) aug.at(r, c) = m.at(r, c);
    aug.at(r, m.cols + r) = m.f.one();
  }
  // plain Gaussian elimination restricted to the first m.cols columns
  int rank = 0;
  for (int col = 0; col < m.cols && rank < aug.rows; ++col) {
    int pivot = -1;
    for (int r = rank; r < aug.rows; ++r)
      if (!aug.at(r, col).is_zero()) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    if (pivot != rank)
      for (int c = 0; c < aug.cols; ++c) std::swap(aug.at(pivot, c), aug.at(rank, c));
    auto inv = m.f.one() / aug.at(rank, col);
    for (int c = 0; c < aug.cols; ++c) aug.at(rank, c) *= inv;
    for (int r = 0; r < aug.rows; ++r) {
      if (r == rank) continue;
      auto factor = aug.at(r, col);
      if (factor.is_zero()) continue;
      for (int c = 0; c < aug.cols; ++c) aug.at(r, c) -= factor * aug.at(rank, c);
    }
    ++rank;
  }
  std::vector<Vec<K>> rows;
  for (int r = rank; r < aug.rows; ++r) {
    Vec<K> v(aug.a.begin() + static_cast<size_t>(r) * aug.cols + m.cols,
             aug.a.begin() + static_cast<size_t>(r + 1) * aug.cols);
    rows.push_back(std::move(v));
  }
  return rref(Mat<K>::from_rows(m.f, rows, m.rows));
}

/// One solution x of x A = b (x a row vector), or nullopt.
template <class K>
std::optional<Vec<K>> solve_left(const Mat<K>& a, const Vec<K>& b) {
  // Transpose into columns-as-equations: solve A^T x^T = b^T by rref of
  // [A^T | b^T].
  Mat<K> aug(a.f, a.cols, a.rows + 1);
  for (int r = 0; r < a.cols; ++r) {
    for (int c = 0; c < a.rows; ++c) aug.at(r, c) = a.at(c, r);
    aug.at(r, a.rows) = b[static_cast<size_t>(r)];
  }
  rref_inplace(aug);
  Vec<K> x = zero_vec(a.f, a.rows);
  for (int r = 0; r < aug.rows; ++r) {
    int p = -1;
    for (int c = 0; c < aug.cols; ++c)
      if (!aug.at(r, c).is_zero()) {
        p = c;
        break;
      }
    if (p < 0) continue;
    if (p == a.rows) return std::nullopt;  // inconsistent row 0 ... 0 | 1
    x[static_cast<size_t>(p)] = aug.at(r, a.rows);
  }
  return x;
}

template <class K>
Mat<K> row_stack(const Mat<K>& a, const Mat<K>& b) {
  Mat<K> out(a.f, a.rows + b.rows, a.cols);
  for (int r = 0; r < a.rows; ++r) out.set_row(r, a.row(r));
  for (int r = 0; r < b.rows; ++r) out.set_row(a.rows + r, b.row(r));
  return out;
}

/// rref basis of the sum of two row spaces.
template <class K>
Mat<K> rowspace_sum(const Mat<K>& a, const Mat<K>& b) {
  return rref(row_stack(a, b));
}

/// rref basis of the intersection of two row spaces.
template <class K>
Mat<K> rowspace_intersect(const Mat<K>& a, const Mat<K>& b) {
  if (a.rows == 0 || b.rows == 0) return Mat<K>(a.f, 0, a.cols);
  Mat<K> stacked = row_stack(a, b);
  Mat<K> ker = left_kernel(stacked);  // (x, y) with x A + y B = 0
  std::vector<Vec<K>> rows;
  for (int r = 0; r < ker.rows; ++r) {
    Vec<K> coeff(ker.a.begin() + static_cast<size_t>(r) * ker.cols,
                 ker.a.begin() + static_cast<size_t>(r) * ker.cols + a.rows);
    Vec<K> v = row_apply<K>(coeff, a);
    if (!is_zero_vec<K>(v)) rows.push_back(std::move(v));
  }
  return rref(Mat<K>::from_rows(a.f, rows, a.cols));
}

}  // namespace partact
