#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "etatrace/laurent.hpp"
#include "etatrace/rational.hpp"

namespace etatrace {

/// Truncated formal series with exact rational exponents and coefficients.
/// Every series carries its own cutoff: terms with exponent >= cutoff are
/// unknown and never stored; binary operations truncate to the smaller cutoff.
class QSeries {
 public:
  explicit QSeries(Rational cutoff) : cutoff_(std::move(cutoff)) {
    if (sgn(cutoff_) <= 0) throw std::invalid_argument("QSeries: cutoff must be positive");
  }

  static QSeries constant(const Rational& c, const Rational& cutoff) {
    QSeries s(cutoff);
    s.add_term(Rational(0), c);
    return s;
  }

  const Rational& cutoff() const { return cutoff_; }
  const std::map<Rational, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  Rational coeff(const Rational& exp) const {
    auto it = terms_.find(exp);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  void add_term(const Rational& exp, const Rational& c) {
    if (exp >= cutoff_ || sgn(c) == 0) return;
    auto [it, inserted] = terms_.emplace(exp, c);
    if (!inserted) {
      it->second += c;
      if (sgn(it->second) == 0) terms_.erase(it);
    }
  }

  friend QSeries operator+(const QSeries& a, const QSeries& b) { return merged(a, b, 1); }
  friend QSeries operator-(const QSeries& a, const QSeries& b) { return merged(a, b, -1); }

  friend QSeries operator*(const QSeries& a, const QSeries& b) {
    QSeries r(std::min(a.cutoff_, b.cutoff_));
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        Rational e = ea + eb;
        if (e >= r.cutoff_) break;  // eb ascends, so the sum only grows
        r.add_term(e, ca * cb);
      }
    }
    return r;
  }

  QSeries operator-() const {
    QSeries r(cutoff_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
  }

  /// Integer power; negative exponents require an invertible constant term.
  QSeries pow(long n) const {
    if (n < 0) return inverse().pow(-n);
    QSeries r = constant(Rational(1), cutoff_);
    QSeries base = *this;
    unsigned long m = static_cast<unsigned long>(n);
    while (m) {
      if (m & 1) r = r * base;
      m >>= 1;
      if (m) base = base * base;
    }
    return r;
  }

  /// Multiplicative inverse in the truncated ring.
  QSeries inverse() const {
    Rational a0 = coeff(Rational(0));
    if (sgn(a0) == 0 || (!terms_.empty() && sgn(terms_.begin()->first) < 0))
      throw std::domain_error("QSeries: inverse requires an invertible constant term");
    // candidate exponents: additive closure of the support below the cutoff
    std::set<Rational> exps;
    exps.insert(Rational(0));
    for (auto it = exps.begin(); it != exps.end(); ++it) {
      for (const auto& [f, cf] : terms_) {
        if (sgn(f) == 0) continue;
        Rational e = *it + f;
        if (e < cutoff_) exps.insert(e);
      }
    }
    QSeries r(cutoff_);
    std::map<Rational, Rational> b;
    for (const auto& e : exps) {
      Rational acc = (sgn(e) == 0) ? Rational(1) : Rational(0);
      for (const auto& [f, cf] : terms_) {
        if (sgn(f) == 0 || f > e) continue;
        auto it = b.find(e - f);
        if (it != b.end()) acc -= cf * it->second;
      }
      acc /= a0;
      b[e] = acc;
      if (sgn(acc) != 0) r.terms_.emplace(e, acc);
    }
    return r;
  }

  /// Term-by-term equality below the common cutoff.
  bool eq_to_cutoff(const QSeries& o) const { return !first_discrepancy(o).has_value(); }

  /// Smallest exponent below min(cutoffs) where coefficients differ.
  std::optional<std::tuple<Rational, Rational, Rational>> first_discrepancy(const QSeries& o) const {
    Rational bound = std::min(cutoff_, o.cutoff_);
    auto ia = terms_.begin(), ib = o.terms_.begin();
    while (ia != terms_.end() || ib != o.terms_.end()) {
      if (ib == o.terms_.end() || (ia != terms_.end() && ia->first < ib->first)) {
        if (ia->first >= bound) break;
        return std::make_tuple(ia->first, ia->second, Rational(0));
      }
      if (ia == terms_.end() || ib->first < ia->first) {
        if (ib->first >= bound) break;
        return std::make_tuple(ib->first, Rational(0), ib->second);
      }
      if (ia->first >= bound) break;
      if (ia->second != ib->second) return std::make_tuple(ia->first, ia->second, ib->second);
      ++ia, ++ib;
    }
    return std::nullopt;
  }

  std::string str(const std::string& var = "x") const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [e, c] : terms_) {
      std::string mag = Rational(abs(c)).get_str();
      bool neg = sgn(c) < 0;
      if (out.empty()) out += neg ? "-" : "";
      else out += neg ? " - " : " + ";
      if (sgn(e) == 0) { out += mag; continue; }
      if (mag != "1") out += mag + "*";
      out += var;
      if (e != 1) {
        out += "^";
        out += is_integer(e) ? e.get_str() : "(" + e.get_str() + ")";
      }
    }
    return out;
  }

 private:
  std::map<Rational, Rational> terms_;
  Rational cutoff_;

  static QSeries merged(const QSeries& a, const QSeries& b, int sign) {
    QSeries r(std::min(a.cutoff_, b.cutoff_));
    for (const auto& [e, c] : a.terms_) r.add_term(e, c);
    for (const auto& [e, c] : b.terms_) r.add_term(e, sign < 0 ? Rational(-c) : c);
    return r;
  }
};

/// Truncation of prod_{n>=1} (1 - x^{n*scale}).
inline QSeries euler_phi(const Rational& scale, const Rational& cutoff) {
  if (sgn(scale) <= 0) throw std::invalid_argument("euler_phi: scale must be positive");
  QSeries acc = QSeries::constant(Rational(1), cutoff);
  for (long n = 1;; ++n) {
    Rational e = scale * n;
    if (e >= cutoff) break;
    // acc *= (1 - x^e)
    QSeries next(cutoff);
    for (const auto& [f, c] : acc.terms()) {
      next.add_term(f, c);
      next.add_term(f + e, -c);
    }
    acc = std::move(next);
  }
  return acc;
}

/// Euler's pentagonal expansion: sum over n in Z of (-1)^n x^{(3n^2-n)/2}.
inline QSeries pentagonal_series(const Rational& cutoff) {
  QSeries s(cutoff);
  for (long n = 0;; ++n) {
    Rational ep = make_rational(3 * n * n - n, 2);
    Rational em = make_rational(3 * n * n + n, 2);
    if (ep >= cutoff && em >= cutoff) break;
    Rational c((n % 2 == 0) ? 1 : -1);
    s.add_term(ep, c);
    if (n > 0) s.add_term(em, c);
  }
  return s;
}

/// Jacobi's cube: sum_{n>=0} (-1)^n (2n+1) x^{n(n+1)/2}.
inline QSeries jacobi_cube_series(const Rational& cutoff) {
  QSeries s(cutoff);
  for (long n = 0;; ++n) {
    Rational e = make_rational(n * (n + 1), 2);
    if (e >= cutoff) break;
    s.add_term(e, make_rational((n % 2 == 0) ? (2 * n + 1) : -(2 * n + 1)));
  }
  return s;
}

/// Partition generating series sum p(n) x^n, with p(n) computed by the
/// standard coin-style recurrence (independent of the Euler product).
inline QSeries partition_series(const Rational& cutoff) {
  long n_max = rational_floor(cutoff);
  if (Rational(n_max) >= cutoff) n_max -= 1;  // strict truncation
  QSeries s(cutoff);
  if (n_max < 0) return s;
  std::vector<Int> p(static_cast<size_t>(n_max + 1), 0);
  p[0] = 1;
  for (long part = 1; part <= n_max; ++part)
    for (long n = part; n <= n_max; ++n)
      p[static_cast<size_t>(n)] += p[static_cast<size_t>(n - part)];
  for (long n = 0; n <= n_max; ++n) s.add_term(Rational(n), Rational(p[static_cast<size_t>(n)]));
  return s;
}

/// View of a Laurent polynomial as a truncated series in q.
inline QSeries qseries_from_laurent(const LaurentPoly& p, const Rational& cutoff) {
  QSeries s(cutoff);
  for (const auto& [e, c] : p.terms()) s.add_term(Rational(e), c);
  return s;
}

}  // namespace etatrace
