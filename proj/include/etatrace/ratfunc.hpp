#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include "etatrace/laurent.hpp"

namespace etatrace {

struct PoleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Element of Q(q) as a reduced fraction of Laurent polynomials.
/// Canonical form: gcd(num, den) = 1, den has lowest exponent 0 and lowest
/// coefficient 1. Equality is therefore structural.
class RatFunc {
 public:
  RatFunc() : num_(), den_(1) {}
  RatFunc(long c) : num_(c), den_(1) {}
  RatFunc(const Rational& c) : num_(c), den_(1) {}
  RatFunc(const LaurentPoly& p) : num_(p), den_(1) {}
  RatFunc(LaurentPoly num, LaurentPoly den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw std::domain_error("RatFunc: zero denominator");
    reduce();
    normalize_unit();
  }

  const LaurentPoly& num() const { return num_; }
  const LaurentPoly& den() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_.is_one() && den_.is_one(); }
  bool is_laurent() const { return den_.is_one(); }

  friend bool operator==(const RatFunc& a, const RatFunc& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const RatFunc& a, const RatFunc& b) { return !(a == b); }

  friend RatFunc operator-(const RatFunc& a) { return RatFunc(-a.num_, a.den_, unchecked{}); }

  friend RatFunc operator+(const RatFunc& a, const RatFunc& b) { return add(a, b, false); }
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b) { return add(a, b, true); }

  friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
    if (a.is_zero() || b.is_zero()) return {};
    if (a.den_.is_one() && b.den_.is_one()) return RatFunc(a.num_ * b.num_, LaurentPoly(1), unchecked{});
    // cross-cancel so gcds run on the small inputs
    LaurentPoly g1 = laurent_gcd(a.num_, b.den_);
    LaurentPoly g2 = laurent_gcd(b.num_, a.den_);
    LaurentPoly n = (g1.is_one() ? a.num_ : divexact(a.num_, g1)) *
                    (g2.is_one() ? b.num_ : divexact(b.num_, g2));
    LaurentPoly d = (g2.is_one() ? a.den_ : divexact(a.den_, g2)) *
                    (g1.is_one() ? b.den_ : divexact(b.den_, g1));
    RatFunc r(std::move(n), std::move(d), unchecked{});
    r.normalize_unit();
    return r;
  }

  friend RatFunc operator/(const RatFunc& a, const RatFunc& b) { return a * b.inverse(); }

  RatFunc& operator+=(const RatFunc& o) { *this = *this + o; return *this; }
  RatFunc& operator-=(const RatFunc& o) { *this = *this - o; return *this; }
  RatFunc& operator*=(const RatFunc& o) { *this = *this * o; return *this; }
  RatFunc& operator/=(const RatFunc& o) { *this = *this / o; return *this; }

  RatFunc inverse() const {
    if (is_zero()) throw std::domain_error("RatFunc: inverse of zero");
    RatFunc r(den_, num_, unchecked{});
    r.normalize_unit();
    return r;
  }

  /// q -> q^{-1}
  RatFunc bar() const {
    RatFunc r(num_.bar(), den_.bar(), unchecked{});
    r.normalize_unit();
    return r;
  }

  /// Exact value at q = 1; throws PoleError when the reduced denominator
  /// vanishes there (common (q-1)-powers are already cancelled by reduction).
  Rational eval_at_one() const {
    Rational d = den_.eval_one();
    if (sgn(d) == 0) throw PoleError("RatFunc: pole at q = 1");
    return num_.eval_one() / d;
  }

  std::string str(const std::string& var = "q") const {
    if (den_.is_one()) return num_.str(var);
    return "(" + num_.str(var) + ")/(" + den_.str(var) + ")";
  }

 private:
  LaurentPoly num_, den_;

  struct unchecked {};
  RatFunc(LaurentPoly n, LaurentPoly d, unchecked) : num_(std::move(n)), den_(std::move(d)) {}

  static RatFunc add(const RatFunc& a, const RatFunc& b, bool sub) {
    if (a.is_zero()) return sub ? -b : b;
    if (b.is_zero()) return a;
    if (a.den_.is_one() && b.den_.is_one())
      return RatFunc(sub ? a.num_ - b.num_ : a.num_ + b.num_, LaurentPoly(1), unchecked{});
    LaurentPoly g = laurent_gcd(a.den_, b.den_);
    if (g.is_one()) {
      LaurentPoly n = sub ? a.num_ * b.den_ - b.num_ * a.den_ : a.num_ * b.den_ + b.num_ * a.den_;
      RatFunc r(std::move(n), a.den_ * b.den_, unchecked{});
      if (r.num_.is_zero()) return {};
      r.normalize_unit();
      return r;
    }
    LaurentPoly bd = divexact(a.den_, g), dd = divexact(b.den_, g);
    LaurentPoly t = sub ? a.num_ * dd - b.num_ * bd : a.num_ * dd + b.num_ * bd;
    if (t.is_zero()) return {};
    LaurentPoly h = laurent_gcd(t, g);
    if (!h.is_one()) { t = divexact(t, h); g = divexact(g, h); }
    RatFunc r(std::move(t), bd * dd * g, unchecked{});
    r.normalize_unit();
    return r;
  }

  void reduce() {
    if (num_.is_zero()) { den_ = LaurentPoly(1); return; }
    LaurentPoly g = laurent_gcd(num_, den_);
    if (!g.is_one()) { num_ = divexact(num_, g); den_ = divexact(den_, g); }
  }

  // den gets lowest exponent 0 and lowest coefficient 1
  void normalize_unit() {
    if (num_.is_zero()) { den_ = LaurentPoly(1); return; }
    long e = den_.min_exp();
    Rational c = den_.coeff(e);
    if (e != 0 || c != 1) {
      Rational inv = 1 / c;
      den_ = den_.scaled(-e, inv);
      num_ = num_.scaled(-e, inv);
    }
  }
};

inline Rational ratfunc_eval_at_one(const RatFunc& f) { return f.eval_at_one(); }

}  // namespace etatrace
