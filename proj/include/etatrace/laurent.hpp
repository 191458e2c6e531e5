#pragma once

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "etatrace/rational.hpp"

namespace etatrace {

/// Laurent polynomial in one variable q with exact rational coefficients.
/// Terms are kept sorted by exponent with no stored zeros, so equality is
/// structural and every value has a unique representation.
class LaurentPoly {
 public:
  using Term = std::pair<long, Rational>;

  LaurentPoly() = default;
  LaurentPoly(long c) { if (c != 0) terms_.emplace_back(0, make_rational(c)); }
  LaurentPoly(const Rational& c) { if (sgn(c) != 0) terms_.emplace_back(0, c); }

  static LaurentPoly monomial(long exp, const Rational& c = Rational(1)) {
    LaurentPoly p;
    if (sgn(c) != 0) p.terms_.emplace_back(exp, c);
    return p;
  }

  bool is_zero() const { return terms_.empty(); }
  bool is_one() const {
    return terms_.size() == 1 && terms_[0].first == 0 && terms_[0].second == 1;
  }
  bool is_monomial() const { return terms_.size() == 1; }
  size_t term_count() const { return terms_.size(); }
  const std::vector<Term>& terms() const { return terms_; }

  long min_exp() const { check_nonzero(); return terms_.front().first; }
  long max_exp() const { check_nonzero(); return terms_.back().first; }

  Rational coeff(long exp) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), exp,
                               [](const Term& t, long e) { return t.first < e; });
    if (it != terms_.end() && it->first == exp) return it->second;
    return Rational(0);
  }

  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
    return a.terms_ == b.terms_;
  }
  friend bool operator!=(const LaurentPoly& a, const LaurentPoly& b) { return !(a == b); }

  friend LaurentPoly operator-(const LaurentPoly& a) {
    LaurentPoly r;
    r.terms_.reserve(a.terms_.size());
    for (const auto& [e, c] : a.terms_) r.terms_.emplace_back(e, -c);
    return r;
  }

  friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) {
    return merge(a, b, false);
  }
  friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) {
    return merge(a, b, true);
  }

  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    if (a.terms_.size() == 1) return b.scaled(a.terms_[0].first, a.terms_[0].second);
    if (b.terms_.size() == 1) return a.scaled(b.terms_[0].first, b.terms_[0].second);
    // dense accumulation over the exponent span
    long lo = a.min_exp() + b.min_exp();
    long hi = a.max_exp() + b.max_exp();
    std::vector<Rational> acc(static_cast<size_t>(hi - lo + 1));
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) acc[static_cast<size_t>(ea + eb - lo)] += ca * cb;
    LaurentPoly r;
    for (size_t k = 0; k < acc.size(); ++k)
      if (sgn(acc[k]) != 0) r.terms_.emplace_back(lo + static_cast<long>(k), std::move(acc[k]));
    return r;
  }

  LaurentPoly& operator+=(const LaurentPoly& o) { *this = *this + o; return *this; }
  LaurentPoly& operator-=(const LaurentPoly& o) { *this = *this - o; return *this; }
  LaurentPoly& operator*=(const LaurentPoly& o) { *this = *this * o; return *this; }

  /// Multiplies by c·q^shift.
  LaurentPoly scaled(long shift, const Rational& c) const {
    LaurentPoly r;
    if (sgn(c) == 0) return r;
    r.terms_.reserve(terms_.size());
    for (const auto& [e, k] : terms_) r.terms_.emplace_back(e + shift, k * c);
    return r;
  }

  LaurentPoly pow(unsigned long n) const {
    LaurentPoly r(1), base = *this;
    while (n) {
      if (n & 1) r *= base;
      n >>= 1;
      if (n) base *= base;
    }
    return r;
  }

  /// Value at q = 1 (sum of coefficients).
  Rational eval_one() const {
    Rational s(0);
    for (const auto& [e, c] : terms_) s += c;
    return s;
  }

  /// q -> q^{-1}
  LaurentPoly bar() const {
    LaurentPoly r;
    r.terms_.reserve(terms_.size());
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it)
      r.terms_.emplace_back(-it->first, it->second);
    return r;
  }

  /// Exact division; throws if the divisor does not divide exactly.
  friend LaurentPoly divexact(const LaurentPoly& a, const LaurentPoly& b) {
    if (b.is_zero()) throw std::domain_error("divexact: division by zero");
    if (a.is_zero()) return {};
    if (b.terms_.size() == 1)
      return a.scaled(-b.terms_[0].first, Rational(1) / b.terms_[0].second);
    // long division from the top, on exponents shifted so both start at 0
    long sa = a.min_exp(), sb = b.min_exp();
    long da = a.max_exp() - sa, db = b.max_exp() - sb;
    if (da < db) throw std::domain_error("divexact: not divisible");
    std::vector<Rational> rem(static_cast<size_t>(da + 1));
    for (const auto& [e, c] : a.terms_) rem[static_cast<size_t>(e - sa)] = c;
    std::vector<Rational> div(static_cast<size_t>(db + 1));
    for (const auto& [e, c] : b.terms_) div[static_cast<size_t>(e - sb)] = c;
    std::vector<Rational> quo(static_cast<size_t>(da - db + 1));
    for (long i = da - db; i >= 0; --i) {
      Rational c = rem[static_cast<size_t>(i + db)];
      if (sgn(c) == 0) continue;
      c /= div[static_cast<size_t>(db)];
      quo[static_cast<size_t>(i)] = c;
      for (long j = 0; j <= db; ++j) rem[static_cast<size_t>(i + j)] -= c * div[static_cast<size_t>(j)];
    }
    for (const auto& c : rem)
      if (sgn(c) != 0) throw std::domain_error("divexact: not divisible");
    LaurentPoly r;
    for (size_t k = 0; k < quo.size(); ++k)
      if (sgn(quo[k]) != 0) r.terms_.emplace_back(sa - sb + static_cast<long>(k), std::move(quo[k]));
    return r;
  }

  std::string str(const std::string& var = "q") const {
    if (terms_.empty()) return "0";
    std::string out;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const auto& [e, c] = *it;
      std::string mag = Rational(abs(c)).get_str();
      bool neg = sgn(c) < 0;
      if (out.empty()) out += neg ? "-" : "";
      else out += neg ? " - " : " + ";
      if (e == 0) { out += mag; continue; }
      if (mag != "1") out += mag + "*";
      out += var;
      if (e != 1) out += "^" + std::to_string(e);
    }
    return out;
  }

 private:
  std::vector<Term> terms_;

  void check_nonzero() const {
    if (terms_.empty()) throw std::domain_error("LaurentPoly: zero polynomial has no degree");
  }

  static LaurentPoly merge(const LaurentPoly& a, const LaurentPoly& b, bool sub) {
    LaurentPoly r;
    r.terms_.reserve(a.terms_.size() + b.terms_.size());
    auto ia = a.terms_.begin(), ib = b.terms_.begin();
    while (ia != a.terms_.end() || ib != b.terms_.end()) {
      if (ib == b.terms_.end() || (ia != a.terms_.end() && ia->first < ib->first)) {
        r.terms_.push_back(*ia++);
      } else if (ia == a.terms_.end() || ib->first < ia->first) {
        r.terms_.emplace_back(ib->first, sub ? Rational(-ib->second) : ib->second);
        ++ib;
      } else {
        Rational c = sub ? Rational(ia->second - ib->second) : Rational(ia->second + ib->second);
        if (sgn(c) != 0) r.terms_.emplace_back(ia->first, std::move(c));
        ++ia, ++ib;
      }
    }
    return r;
  }
};

/// q-integer [n] evaluated at q^d: (q^{dn} - q^{-dn}) / (q^d - q^{-d}).
inline LaurentPoly qnum(long n, long d = 1) {
  if (d <= 0) throw std::invalid_argument("qnum: d must be positive");
  if (n == 0) return {};
  bool neg = n < 0;
  long m = neg ? -n : n;
  LaurentPoly p;
  for (long j = 0; j < m; ++j) p += LaurentPoly::monomial(d * (m - 1 - 2 * j));
  return neg ? -p : p;
}

/// [n]! at q^d.
inline LaurentPoly qfactorial(long n, long d = 1) {
  if (n < 0) throw std::invalid_argument("qfactorial: n must be nonnegative");
  LaurentPoly p(1);
  for (long i = 2; i <= n; ++i) p *= qnum(i, d);
  return p;
}

/// Gaussian binomial [n choose k] at q^d.
inline LaurentPoly qbinomial(long n, long k, long d = 1) {
  if (k < 0 || k > n) throw std::invalid_argument("qbinomial: need 0 <= k <= n");
  if (k > n - k) k = n - k;
  LaurentPoly num(1);
  for (long i = 0; i < k; ++i) num *= qnum(n - i, d);
  return divexact(num, qfactorial(k, d));
}

namespace detail {

// Dense integer polynomial helpers for the gcd remainder sequence.
using ZPoly = std::vector<Int>;  // coefficient of x^i at index i

inline long zdeg(const ZPoly& p) {
  for (long i = static_cast<long>(p.size()) - 1; i >= 0; --i)
    if (p[static_cast<size_t>(i)] != 0) return i;
  return -1;
}

inline void zprimitive(ZPoly& p) {
  Int g = 0;
  for (const auto& c : p)
    if (c != 0) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  if (g == 0) return;
  long dg = zdeg(p);
  if (p[static_cast<size_t>(dg)] < 0) g = -g;
  if (g == 1) return;
  for (auto& c : p) c /= g;
}

// Pseudo-remainder of a by b (in place into a), both nonzero, deg a >= deg b.
inline void zprem(ZPoly& a, const ZPoly& b) {
  long da = zdeg(a), db = zdeg(b);
  const Int& lb = b[static_cast<size_t>(db)];
  for (long i = da; i >= db; --i) {
    Int c = a[static_cast<size_t>(i)];
    if (c == 0) {
      continue;
    }
    for (long j = 0; j <= da; ++j)
      if (j != i && a[static_cast<size_t>(j)] != 0) a[static_cast<size_t>(j)] *= lb;
    a[static_cast<size_t>(i)] = 0;
    for (long j = 0; j < db; ++j) a[static_cast<size_t>(i - db + j)] -= c * b[static_cast<size_t>(j)];
  }
}

inline ZPoly to_zpoly(const LaurentPoly& p) {
  // shift to exponent 0 and clear rational denominators; units of the Laurent
  // ring do not affect the gcd
  Int lcm = 1;
  for (const auto& [e, c] : p.terms())
    mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den().get_mpz_t());
  long lo = p.min_exp();
  ZPoly z(static_cast<size_t>(p.max_exp() - lo + 1));
  for (const auto& [e, c] : p.terms()) {
    Rational scaled = c * lcm;
    z[static_cast<size_t>(e - lo)] = scaled.get_num();
  }
  zprimitive(z);
  return z;
}

inline LaurentPoly from_zpoly(const ZPoly& z) {
  LaurentPoly r;
  for (size_t i = 0; i < z.size(); ++i)
    if (z[i] != 0) r += LaurentPoly::monomial(static_cast<long>(i), Rational(z[i]));
  return r;
}

}  // namespace detail

/// Gcd in Q[q,q^{-1}], canonicalized: primitive integer coefficients,
/// lowest exponent 0, positive leading coefficient. Monomials are units.
inline LaurentPoly laurent_gcd(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.is_zero() && b.is_zero()) return {};
  if (a.is_zero()) { auto z = detail::to_zpoly(b); return detail::from_zpoly(z); }
  if (b.is_zero()) { auto z = detail::to_zpoly(a); return detail::from_zpoly(z); }
  if (a.is_monomial() || b.is_monomial()) return LaurentPoly(1);
  detail::ZPoly x = detail::to_zpoly(a), y = detail::to_zpoly(b);
  if (detail::zdeg(x) < detail::zdeg(y)) std::swap(x, y);
  // primitive polynomial remainder sequence
  while (true) {
    long dy = detail::zdeg(y);
    if (dy < 0) break;
    if (dy == 0) return LaurentPoly(1);
    detail::zprem(x, y);
    detail::zprimitive(x);
    x.resize(static_cast<size_t>(std::max<long>(detail::zdeg(x), 0)) + 1);
    std::swap(x, y);
  }
  detail::zprimitive(x);
  return detail::from_zpoly(x);
}

}  // namespace etatrace
