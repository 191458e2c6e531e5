#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "etatrace/laurent.hpp"
#include "etatrace/qseries.hpp"
#include "etatrace/ratfunc.hpp"

using namespace etatrace;

namespace {

LaurentPoly poly_from(std::initializer_list<std::pair<long, long>> ts) {
  LaurentPoly p;
  for (auto [e, c] : ts) p += LaurentPoly::monomial(e, make_rational(c));
  return p;
}

std::mt19937 rng(20260809);

LaurentPoly random_poly() {
  std::uniform_int_distribution<int> nterms(0, 4), expd(-5, 5), coefd(-6, 6);
  LaurentPoly p;
  int n = nterms(rng);
  for (int i = 0; i < n; ++i) p += LaurentPoly::monomial(expd(rng), make_rational(coefd(rng)));
  return p;
}

RatFunc random_ratfunc() {
  LaurentPoly den;
  while (den.is_zero()) den = random_poly();
  return RatFunc(random_poly(), den);
}

}  // namespace

TEST_CASE("q-integers") {
  CHECK(qnum(1, 1) == LaurentPoly(1));
  CHECK(qnum(2, 1) == poly_from({{1, 1}, {-1, 1}}));
  // (q^6 - q^-6)/(q^2 - q^-2) by long division
  CHECK(qnum(3, 2) == poly_from({{4, 1}, {0, 1}, {-4, 1}}));
  CHECK(qnum(-2, 1) == -qnum(2, 1));
  CHECK(qnum(5, 1).eval_one() == 5);
}

TEST_CASE("q-factorials") {
  CHECK(qfactorial(0, 1) == LaurentPoly(1));
  CHECK(qfactorial(2, 1) == poly_from({{1, 1}, {-1, 1}}));
  CHECK(qfactorial(3, 1) == poly_from({{3, 1}, {1, 2}, {-1, 2}, {-3, 1}}));
}

TEST_CASE("q-binomials") {
  CHECK(qbinomial(7, 0, 1) == LaurentPoly(1));
  CHECK(qbinomial(2, 1, 1) == poly_from({{1, 1}, {-1, 1}}));
  CHECK(qbinomial(4, 2, 1) == poly_from({{4, 1}, {2, 1}, {0, 2}, {-2, 1}, {-4, 1}}));
  CHECK_THROWS_AS(qbinomial(2, 3, 1), std::invalid_argument);

  // symmetry in k <-> n-k and invariance under q -> q^{-1}
  for (long n = 0; n <= 8; ++n)
    for (long k = 0; k <= n; ++k)
      for (long d = 1; d <= 2; ++d) {
        LaurentPoly b = qbinomial(n, k, d);
        CHECK(b == qbinomial(n, n - k, d));
        CHECK(b == b.bar());
      }
}

TEST_CASE("laurent ring axioms on random triples") {
  for (int trial = 0; trial < 300; ++trial) {
    LaurentPoly a = random_poly(), b = random_poly(), c = random_poly();
    CHECK(a + b == b + a);
    CHECK(a * b == b * a);
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a - a == LaurentPoly());
  }
}

TEST_CASE("laurent gcd and exact division") {
  LaurentPoly a = qnum(6), b = qnum(4);
  LaurentPoly g = laurent_gcd(a, b);  // both divisible by [2]
  CHECK(g == laurent_gcd(b, a));
  CHECK(divexact(a, g) * g == a);
  CHECK(divexact(b, g) * g == b);
  CHECK(laurent_gcd(LaurentPoly::monomial(3, make_rational(5)), a) == LaurentPoly(1));
  for (int trial = 0; trial < 100; ++trial) {
    LaurentPoly x = random_poly(), y = random_poly();
    if (x.is_zero() || y.is_zero()) continue;
    LaurentPoly p = x * y;
    CHECK(divexact(p, x) == y);
    LaurentPoly gg = laurent_gcd(p, x);
    CHECK(divexact(p, gg).is_zero() == false);
  }
}

TEST_CASE("ratfunc field axioms on random triples") {
  for (int trial = 0; trial < 150; ++trial) {
    RatFunc a = random_ratfunc(), b = random_ratfunc(), c = random_ratfunc();
    CHECK(a + b == b + a);
    CHECK(a * b == b * a);
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a - a == RatFunc());
    if (!a.is_zero()) CHECK(a * a.inverse() == RatFunc(1));
  }
}

TEST_CASE("ratfunc normalization gives structural equality") {
  RatFunc a(qnum(2), qnum(4));
  RatFunc b(qnum(2) * qnum(3), qnum(4) * qnum(3));
  CHECK(a == b);
  RatFunc scaled(qnum(2).scaled(5, make_rational(7)), qnum(4).scaled(5, make_rational(7)));
  CHECK(a == scaled);
  CHECK(scaled.den().min_exp() == 0);
  CHECK(scaled.den().coeff(0) == 1);
}

TEST_CASE("ratfunc evaluation at q = 1") {
  CHECK(ratfunc_eval_at_one(RatFunc(LaurentPoly::monomial(5))) == 1);
  for (long n = 1; n <= 9; ++n) {
    RatFunc f(qnum(n), LaurentPoly(1));
    CHECK(ratfunc_eval_at_one(f) == n);
  }
  // (q - q^-1) / (q^2 - q^-2) -> 1/2 after cancelling
  RatFunc f(poly_from({{1, 1}, {-1, -1}}), poly_from({{2, 1}, {-2, -1}}));
  CHECK(ratfunc_eval_at_one(f) == make_rational(1, 2));
  RatFunc pole(LaurentPoly(1), poly_from({{1, 1}, {0, -1}}));
  CHECK_THROWS_AS(pole.eval_at_one(), PoleError);
}

TEST_CASE("pentagonal expansion at small cutoff") {
  QSeries p = pentagonal_series(make_rational(6));
  QSeries expect(make_rational(6));
  expect.add_term(make_rational(0), make_rational(1));
  expect.add_term(make_rational(1), make_rational(-1));
  expect.add_term(make_rational(2), make_rational(-1));
  expect.add_term(make_rational(5), make_rational(1));
  CHECK(p.eq_to_cutoff(expect));
  CHECK(pentagonal_series(make_rational(1)).str() == "1");
  CHECK(euler_phi(make_rational(1), make_rational(1)).str() == "1");
  CHECK(euler_phi(make_rational(1), make_rational(6)).eq_to_cutoff(expect));
}

TEST_CASE("euler product equals pentagonal series to cutoff 400") {
  QSeries prod = euler_phi(make_rational(1), make_rational(400));
  QSeries pent = pentagonal_series(make_rational(400));
  CHECK(prod.eq_to_cutoff(pent));
}

TEST_CASE("scaled euler product substitutes x -> x^scale") {
  QSeries e2 = euler_phi(make_rational(2), make_rational(9));
  QSeries pent = pentagonal_series(make_rational(100));
  QSeries expect(make_rational(9));
  for (const auto& [e, c] : pent.terms()) expect.add_term(e * 2, c);
  CHECK(e2.eq_to_cutoff(expect));
  // rational scale: exponents stay exact
  QSeries half = euler_phi(make_rational(1, 2), make_rational(3));
  CHECK(half.coeff(make_rational(1, 2)) == -1);
  CHECK(half.coeff(make_rational(3, 2)) == 0);  // 3 is not a pentagonal number
  CHECK(half.coeff(make_rational(5, 2)) == 1);  // 5 is
}

TEST_CASE("jacobi cube identity to cutoff 200") {
  QSeries cube = euler_phi(make_rational(1), make_rational(200)).pow(3);
  QSeries jac = jacobi_cube_series(make_rational(200));
  CHECK(cube.eq_to_cutoff(jac));
  QSeries j4 = jacobi_cube_series(make_rational(4));
  CHECK(j4.coeff(make_rational(0)) == 1);
  CHECK(j4.coeff(make_rational(1)) == -3);
  CHECK(j4.coeff(make_rational(3)) == 5);
  CHECK(jacobi_cube_series(make_rational(1)).str() == "1");
}

TEST_CASE("partition series inverts the euler product to cutoff 200") {
  QSeries prod = euler_phi(make_rational(1), make_rational(200)) * partition_series(make_rational(200));
  CHECK(prod.eq_to_cutoff(QSeries::constant(make_rational(1), make_rational(200))));
  // and agrees with the ring inverse
  QSeries inv = euler_phi(make_rational(1), make_rational(120)).inverse();
  CHECK(inv.eq_to_cutoff(partition_series(make_rational(120))));
}

TEST_CASE("series pow and truncation semantics") {
  QSeries e = euler_phi(make_rational(1), make_rational(10));
  CHECK(e.pow(1).eq_to_cutoff(e));
  CHECK(e.pow(3).eq_to_cutoff(jacobi_cube_series(make_rational(10))));
  CHECK((e.pow(3) * e.pow(-3)).eq_to_cutoff(QSeries::constant(make_rational(1), make_rational(10))));
  QSeries a(make_rational(5)), b(make_rational(3));
  a.add_term(make_rational(4), make_rational(1));
  b.add_term(make_rational(2), make_rational(1));
  QSeries s = a + b;
  CHECK(s.cutoff() == 3);
  CHECK(s.terms().count(make_rational(4)) == 0);
  QSeries d = e - e;
  CHECK(d.is_zero());
  // discrepancy reporting finds the smallest differing exponent
  QSeries x = QSeries::constant(make_rational(1), make_rational(9));
  QSeries y = QSeries::constant(make_rational(1), make_rational(9));
  y.add_term(make_rational(3), make_rational(2));
  y.add_term(make_rational(7), make_rational(5));
  auto disc = x.first_discrepancy(y);
  REQUIRE(disc.has_value());
  CHECK(std::get<0>(*disc) == 3);
  CHECK(std::get<1>(*disc) == 0);
  CHECK(std::get<2>(*disc) == 2);
}
