#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "partact/common.hpp"
#include "partact/scalar.hpp"

namespace partact {

/// Finite semigroup with zero and an F_p scalar action.  Everything in the
/// K-semigroup sections is pinned to prime fields so that closures stay
/// finite.
struct KSemigroup {
  long long p = 0;
  int zero = 0;
  std::vector<std::string> labels;
  std::vector<std::vector<int>> mul_table;           // total
  std::vector<std::vector<int>> act_table;           // act_table[k][x], k = residue
  int size() const { return static_cast<int>(labels.size()); }
  int mul(int x, int y) const { return mul_table[static_cast<size_t>(x)][static_cast<size_t>(y)]; }
  int act(long long k, int x) const {
    long long r = k % p;
    if (r < 0) r += p;
    return act_table[static_cast<size_t>(r)][static_cast<size_t>(x)];
  }
  int act(const Mod& k, int x) const { return act(k.value(), x); }
  const std::string& label(int x) const { return labels[static_cast<size_t>(x)]; }
};

/// K-semigroup axioms: associativity, absorbing zero, the scalar-action
/// laws, and the K-cancellativity flag.
inline AxiomReport verify_ksemigroup(const KSemigroup& s, bool expect_cancellative = true) {
  Stopwatch clock;
  AxiomReport rep;
  rep.subject = "K-semigroup";
  int n = s.size();
  auto L = [&](int i) { return s.label(i); };

  auto& shape = rep.add("tables-total");
  shape.checked = 1;
  if (static_cast<int>(s.mul_table.size()) != n || static_cast<long long>(s.act_table.size()) != s.p)
    shape.fail({{}, "table shapes do not match the element count and field size"});
  if (!shape.pass) {
    rep.wall_ms = clock.ms();
    return rep;
  }

  auto& assoc = rep.add("associativity");
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) {
        ++assoc.checked;
        if (s.mul(s.mul(x, y), z) != s.mul(x, s.mul(y, z))) {
          assoc.fail({{L(x), L(y), L(z)}, "(xy)z != x(yz)"});
          if (assoc.witnesses.size() >= 3) goto assoc_done;
        }
      }
assoc_done:;

  auto& zero = rep.add("absorbing-zero");
  for (int x = 0; x < n; ++x) {
    ++zero.checked;
    if (s.mul(s.zero, x) != s.zero || s.mul(x, s.zero) != s.zero) zero.fail({{L(x)}, "zero is not absorbing"});
    if (s.act(0, x) != s.zero) zero.fail({{L(x)}, "0_K x != 0_S"});
  }

  auto& action = rep.add("scalar-action");
  for (int x = 0; x < n; ++x) {
    ++action.checked;
    if (s.act(1, x) != x) action.fail({{L(x)}, "1 x != x"});
    for (long long a = 0; a < s.p; ++a) {
      for (long long b = 0; b < s.p; ++b)
        if (s.act(a, s.act(b, x)) != s.act(a * b, x)) {
          action.fail({{L(x)}, "a(bx) != (ab)x"});
          break;
        }
      for (int y = 0; y < n; ++y)
        if (s.act(a, s.mul(x, y)) != s.mul(s.act(a, x), y) ||
            s.act(a, s.mul(x, y)) != s.mul(x, s.act(a, y))) {
          action.fail({{L(x), L(y)}, "a(xy), (ax)y, x(ay) differ"});
          break;
        }
    }
  }

  auto& canc = rep.add("K-cancellative");
  if (expect_cancellative) {
    for (int x = 0; x < n; ++x) {
      if (x == s.zero) continue;
      ++canc.checked;
      for (long long a = 0; a < s.p; ++a)
        for (long long b = a + 1; b < s.p; ++b)
          if (s.act(a, x) == s.act(b, x)) canc.fail({{L(x)}, "ax = bx with a != b and x != 0"});
    }
  } else {
    canc.note = "not required for this input";
  }

  rep.wall_ms = clock.ms();
  return rep;
}

using KSemigroupPtr = std::shared_ptr<const KSemigroup>;

/// Model of a K-cancellative semigroup backed by an explicit KSemigroup
/// table; the value type is the element id.
struct TableModel {
  using value_type = int;
  KSemigroupPtr S;
  FpField f;
  int zero;

  explicit TableModel(KSemigroupPtr s) : S(std::move(s)), f(S->p), zero(S->zero) {}

  int mul(int a, int b) const { return S->mul(a, b); }
  int scale(const Mod& c, int a) const { return S->act(c, a); }
  bool is_zero(int a) const { return a == S->zero; }
  bool equal(int a, int b) const { return a == b; }
  bool less(int a, int b) const { return a < b; }
  std::string show(int a) const { return S->label(a); }

  std::vector<Mod> ratios(int a, int b) const {
    std::vector<Mod> out;
    if (is_zero(b)) return out;
    for (long long k = 1; k < S->p; ++k)
      if (S->act(k, b) == a) out.push_back(Mod(k, S->p));
    return out;
  }
};

/// lambda-classes (x ~ y iff x = a y for a in K*), the projection xi, the
/// least-representative section xi', and the congruence sweep.
struct SemigroupProjection {
  std::vector<int> class_of;        // element -> class id
  std::vector<std::vector<int>> classes;
  std::vector<int> representative;  // class -> least element
  AxiomReport report;

  int xi(int x) const { return class_of[static_cast<size_t>(x)]; }
  int xi_prime(int c) const { return representative[static_cast<size_t>(c)]; }
};

inline SemigroupProjection project_semigroup(const KSemigroup& s) {
  Stopwatch clock;
  SemigroupProjection out;
  int n = s.size();
  out.class_of.assign(static_cast<size_t>(n), -1);
  for (int x = 0; x < n; ++x) {
    if (out.class_of[static_cast<size_t>(x)] >= 0) continue;
    int cls = static_cast<int>(out.classes.size());
    std::set<int> members;
    for (long long k = 1; k < s.p; ++k) members.insert(s.act(k, x));
    members.insert(x);
    out.classes.emplace_back(members.begin(), members.end());
    out.representative.push_back(*members.begin());
    for (int m : out.classes.back()) out.class_of[static_cast<size_t>(m)] = cls;
  }

  auto& equiv = out.report.add("lambda-is-equivalence");
  for (int x = 0; x < n; ++x) {
    ++equiv.checked;
    for (long long k = 1; k < s.p; ++k)
      if (out.xi(s.act(k, x)) != out.xi(x)) equiv.fail({{s.label(x)}, "scalar multiple left its class"});
  }

  auto& cong = out.report.add("lambda-is-congruence");
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      ++cong.checked;
      for (long long k = 1; k < s.p; ++k) {
        int xk = s.act(k, x);
        if (out.xi(s.mul(xk, y)) != out.xi(s.mul(x, y)) || out.xi(s.mul(y, xk)) != out.xi(s.mul(y, x))) {
          cong.fail({{s.label(x), s.label(y)}, "x ~ x' but xy !~ x'y"});
          break;
        }
      }
    }

  auto& section = out.report.add("xi-section");
  for (size_t c = 0; c < out.classes.size(); ++c) {
    ++section.checked;
    if (out.xi(out.xi_prime(static_cast<int>(c))) != static_cast<int>(c))
      section.fail({{}, "xi(xi'(c)) != c"});
  }

  auto& hom = out.report.add("xi-homomorphism");
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      ++hom.checked;
      // well-definedness of the quotient product on classes
      int c = out.xi(s.mul(x, y));
      int viaReps = out.xi(s.mul(out.xi_prime(out.xi(x)), out.xi_prime(out.xi(y))));
      if (c != viaReps) hom.fail({{s.label(x), s.label(y)}, "quotient product not well defined"});
    }

  out.report.subject = "semigroup projectivization";
  out.report.wall_ms = clock.ms();
  return out;
}

}  // namespace partact
