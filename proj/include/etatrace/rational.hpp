#pragma once

#include <gmpxx.h>

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace etatrace {

using Int = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) throw std::domain_error("make_rational: zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// Canonical fraction string: "3/4", "-2", "0".
inline std::string rational_str(const Rational& r) { return r.get_str(); }

inline std::string int_str(const Int& n) { return n.get_str(); }

/// Parses "p", "p/q" or a plain decimal like "2.5" into an exact rational.
inline Rational parse_rational(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("parse_rational: empty string");
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    size_t frac_len = s.size() - dot - 1;
    if (digits.empty() || digits == "-" || digits == "+")
      throw std::invalid_argument("parse_rational: bad decimal '" + s + "'");
    Int num, den = 1;
    if (num.set_str(digits, 10) != 0)
      throw std::invalid_argument("parse_rational: bad decimal '" + s + "'");
    for (size_t i = 0; i < frac_len; ++i) den *= 10;
    Rational r(num, den);
    r.canonicalize();
    return r;
  }
  Rational r;
  if (r.set_str(s, 10) != 0 || sgn(Rational(r.get_den())) <= 0)
    throw std::invalid_argument("parse_rational: bad rational '" + s + "'");
  r.canonicalize();
  return r;
}

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

/// Floor of an exact rational as a machine integer (must fit).
inline long rational_floor(const Rational& r) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
  if (!q.fits_slong_p()) throw std::overflow_error("rational_floor: out of range");
  return q.get_si();
}

inline long to_long(const Rational& r) {
  if (!is_integer(r)) throw std::domain_error("to_long: not an integer: " + r.get_str());
  if (!r.get_num().fits_slong_p()) throw std::overflow_error("to_long: out of range");
  return r.get_num().get_si();
}

}  // namespace etatrace
