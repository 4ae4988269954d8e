#pragma once

#include <cstdint>
#include <cstdlib>
#include <string>

#include "partact/common.hpp"

namespace partact {

// Exact scalars.  Two field backends: Rat (arbitrary-sign 64-bit rationals
// with 128-bit intermediates, throwing OverflowError instead of ever
// rounding) and Mod (residues carrying their prime modulus).  Field handles
// RatField / FpField create elements; the elements themselves carry enough
// context for arithmetic.

namespace detail {

inline std::int64_t fit64(__int128 v, const char* ctx) {
  if (v > INT64_MAX || v < INT64_MIN) throw OverflowError(std::string("rational overflow in ") + ctx);
  return static_cast<std::int64_t>(v);
}

inline __int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace detail

class Rat {
 public:
  Rat() = default;
  Rat(long long n) : _num(n), _den(1) {}  // NOLINT: implicit by design
  Rat(long long n, long long d) { *this = make(n, d); }

  static Rat make(__int128 n, __int128 d) {
    if (d == 0) throw ArgumentError("rational with zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 g = detail::gcd128(n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    Rat r;
    r._num = detail::fit64(n, "reduce");
    r._den = detail::fit64(d, "reduce");
    return r;
  }

  long long num() const { return _num; }
  long long den() const { return _den; }
  bool is_zero() const { return _num == 0; }
  bool is_one() const { return _num == 1 && _den == 1; }

  friend Rat operator+(const Rat& a, const Rat& b) {
    return make(static_cast<__int128>(a._num) * b._den + static_cast<__int128>(b._num) * a._den,
                static_cast<__int128>(a._den) * b._den);
  }
  friend Rat operator-(const Rat& a, const Rat& b) {
    return make(static_cast<__int128>(a._num) * b._den - static_cast<__int128>(b._num) * a._den,
                static_cast<__int128>(a._den) * b._den);
  }
  friend Rat operator*(const Rat& a, const Rat& b) {
    return make(static_cast<__int128>(a._num) * b._num, static_cast<__int128>(a._den) * b._den);
  }
  friend Rat operator/(const Rat& a, const Rat& b) {
    if (b.is_zero()) throw ArgumentError("rational division by zero");
    return make(static_cast<__int128>(a._num) * b._den, static_cast<__int128>(a._den) * b._num);
  }
  Rat operator-() const {
    Rat r = *this;
    r._num = -r._num;
    return r;
  }
  Rat inv() const { return Rat(1) / *this; }

  Rat& operator+=(const Rat& o) { return *this = *this + o; }
  Rat& operator-=(const Rat& o) { return *this = *this - o; }
  Rat& operator*=(const Rat& o) { return *this = *this * o; }

  friend bool operator==(const Rat& a, const Rat& b) { return a._num == b._num && a._den == b._den; }
  friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
  friend bool operator<(const Rat& a, const Rat& b) {
    return static_cast<__int128>(a._num) * b._den < static_cast<__int128>(b._num) * a._den;
  }

  std::string str() const {
    std::string s = std::to_string(_num);
    if (_den != 1) s += "/" + std::to_string(_den);
    return s;
  }

 private:
  std::int64_t _num = 0;
  std::int64_t _den = 1;
};

/// Residue in F_p.  The modulus travels with the value; mixing moduli is a
/// logic error, not a math failure.
class Mod {
 public:
  Mod() = default;
  Mod(long long v, long long p) : _p(p) {
    if (p < 2) throw ArgumentError("modulus must be at least 2");
    _v = v % p;
    if (_v < 0) _v += p;
  }

  long long value() const { return _v; }
  long long modulus() const { return _p; }
  bool is_zero() const { return _v == 0; }
  bool is_one() const { return _v == 1; }

  friend Mod operator+(const Mod& a, const Mod& b) { return Mod(a._v + b.match(a), b._p); }
  friend Mod operator-(const Mod& a, const Mod& b) { return Mod(a._v - b.match(a), b._p); }
  friend Mod operator*(const Mod& a, const Mod& b) { return Mod(a._v * b.match(a), b._p); }
  friend Mod operator/(const Mod& a, const Mod& b) { return a * b.inv(); }
  Mod operator-() const { return Mod(-_v, _p); }

  Mod inv() const {
    if (_v == 0) throw ArgumentError("inverse of zero residue");
    // extended Euclid
    long long a = _v, m = _p, x0 = 1, x1 = 0;
    while (m != 0) {
      long long q = a / m;
      long long t = a - q * m;
      a = m;
      m = t;
      t = x0 - q * x1;
      x0 = x1;
      x1 = t;
    }
    return Mod(x0, _p);
  }

  Mod& operator+=(const Mod& o) { return *this = *this + o; }
  Mod& operator-=(const Mod& o) { return *this = *this - o; }
  Mod& operator*=(const Mod& o) { return *this = *this * o; }

  friend bool operator==(const Mod& a, const Mod& b) { return a._v == b._v && a._p == b._p; }
  friend bool operator!=(const Mod& a, const Mod& b) { return !(a == b); }
  friend bool operator<(const Mod& a, const Mod& b) { return a._v < b._v; }

  std::string str() const { return std::to_string(_v) + " mod " + std::to_string(_p); }

 private:
  long long check_set() const {
    if (_p == 0) throw std::logic_error("use of default-constructed Mod");
    return _p;
  }
  long long match(const Mod& other) const {
    if (check_set() != other.check_set()) throw std::logic_error("mixed moduli");
    return _v;
  }

  std::int64_t _v = 0;
  std::int64_t _p = 0;
};

struct RatField {
  using Elem = Rat;
  static constexpr bool finite = false;

  Rat zero() const { return Rat(0); }
  Rat one() const { return Rat(1); }
  Rat from_long(long long n) const { return Rat(n); }
  long long size() const { throw ArgumentError("rational field is infinite"); }
  std::string name() const { return "Q"; }

  Rat parse(const std::string& tok) const {
    auto slash = tok.find('/');
    try {
      if (slash == std::string::npos) return Rat(std::stoll(tok));
      return Rat(std::stoll(tok.substr(0, slash)), std::stoll(tok.substr(slash + 1)));
    } catch (const std::logic_error&) {
      throw SchemaError("bad rational literal '" + tok + "'");
    }
  }

  /// Literal form used when emitting files the parser reads back.
  std::string print(const Rat& x) const { return x.str(); }
  /// Display form used in reports.
  std::string display(const Rat& x) const { return x.str(); }

  friend bool operator==(const RatField&, const RatField&) { return true; }
};

struct FpField {
  using Elem = Mod;
  static constexpr bool finite = true;

  long long p = 0;

  FpField() = default;
  explicit FpField(long long prime) : p(prime) {
    if (p < 2) throw SchemaError("field characteristic must be a prime >= 2");
    for (long long d = 2; d * d <= p; ++d)
      if (p % d == 0) throw SchemaError("field characteristic " + std::to_string(p) + " is not prime");
  }

  Mod zero() const { return Mod(0, p); }
  Mod one() const { return Mod(1, p); }
  Mod from_long(long long n) const { return Mod(n, p); }
  long long size() const { return p; }
  Mod element(long long i) const { return Mod(i, p); }
  std::string name() const { return "F" + std::to_string(p); }

  Mod parse(const std::string& tok) const {
    try {
      return Mod(std::stoll(tok), p);
    } catch (const std::logic_error&) {
      throw SchemaError("bad residue literal '" + tok + "'");
    }
  }

  std::string print(const Mod& x) const { return std::to_string(x.value()); }
  std::string display(const Mod& x) const { return x.str(); }

  friend bool operator==(const FpField& a, const FpField& b) { return a.p == b.p; }
};

}  // namespace partact
