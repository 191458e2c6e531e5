#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "etatrace/identities.hpp"

using namespace etatrace;

namespace {
ModuleProvider provider() {
  ModuleProvider p;
  p.threads = 2;
  return p;
}
}  // namespace

TEST_CASE("trace terms carry the verified trace data") {
  auto a1 = build_root_datum("A1");
  auto p = provider();
  TraceTerm t0 = quantum_trace_term(a1, {0}, p);
  CHECK(t0.epsilon == 1);
  CHECK(t0.dim == 1);
  CHECK(t0.exponent == 0);

  TraceTerm t2 = quantum_trace_term(a1, {2}, p);
  CHECK(t2.epsilon == -1);
  CHECK(t2.dim == 3);
  CHECK(t2.exponent == 2);

  TraceTerm t4 = quantum_trace_term(a1, {4}, p);
  CHECK(t4.epsilon == 1);
  CHECK(t4.exponent == 6);  // m(m+1) at m = 2

  // odd string: pruned outside the root lattice
  TraceTerm t3 = quantum_trace_term(a1, {3}, p);
  CHECK(t3.epsilon == 0);
  // and the unpruned path verifies the zero trace through the module
  TraceTerm t3f = quantum_trace_term(a1, {3}, p, false);
  CHECK(t3f.epsilon == 0);

  auto a2 = build_root_datum("A2");
  TraceTerm adj = quantum_trace_term(a2, {1, 1}, p);
  CHECK(adj.epsilon == -1);
  CHECK(adj.dim == 8);
  CHECK(adj.exponent == 2);
  CHECK(adj.c_lambda == 1);
}

TEST_CASE("lhs series at small cutoffs") {
  auto p = provider();
  auto a1 = build_root_datum("A1");
  auto [s1, terms1] = lhs_series(a1, make_rational(3), p);
  QSeries expect1(make_rational(3));
  expect1.add_term(Rational(0), Rational(1));
  expect1.add_term(Rational(2), Rational(-3));
  CHECK(s1.eq_to_cutoff(expect1));
  CHECK(terms1.size() == 3);  // lambda = 0, 1, 2 enumerated

  auto a2 = build_root_datum("A2");
  auto [s2, terms2] = lhs_series(a2, make_rational(3), p);
  QSeries expect2(make_rational(3));
  expect2.add_term(Rational(0), Rational(1));
  expect2.add_term(Rational(2), Rational(-8));
  CHECK(s2.eq_to_cutoff(expect2));
}

TEST_CASE("rhs series instantiations") {
  auto a1 = build_root_datum("A1");
  CHECK(rhs_series(a1, make_rational(20)).eq_to_cutoff(euler_phi(make_rational(2), make_rational(20)).pow(3)));
  auto a2 = build_root_datum("A2");
  CHECK(rhs_series(a2, make_rational(10)).eq_to_cutoff(euler_phi(make_rational(2), make_rational(10)).pow(8)));
  auto b2 = build_root_datum("B2");
  QSeries b2_expect = (euler_phi(make_rational(2), make_rational(8)) * euler_phi(make_rational(4), make_rational(8))).pow(5);
  CHECK(rhs_series(b2, make_rational(8)).eq_to_cutoff(b2_expect));
  auto g2 = build_root_datum("G2");
  QSeries g2_expect = (euler_phi(make_rational(2), make_rational(7)) * euler_phi(make_rational(6), make_rational(7))).pow(7);
  CHECK(rhs_series(g2, make_rational(7)).eq_to_cutoff(g2_expect));
}

TEST_CASE("main identity at development cutoffs") {
  auto p = provider();
  for (auto [ts, cutoff] : std::initializer_list<std::pair<const char*, long>>{
           {"A1", 12}, {"A2", 5}, {"B2", 4}, {"G2", 3}}) {
    CAPTURE(ts);
    IdentityReport rep = verify_main_identity(build_root_datum(ts), make_rational(cutoff), p);
    if (!rep.match) {
      std::string msg = rep.first_discrepancy->exponent + ": lhs=" + rep.first_discrepancy->lhs +
                        " rhs=" + rep.first_discrepancy->rhs;
      INFO(msg);
    }
    CHECK(rep.match);
    CHECK(!rep.first_discrepancy.has_value());
  }
  // trivial window: 1 = 1
  IdentityReport tiny = verify_main_identity(build_root_datum("A2"), make_rational(1, 2), p);
  CHECK(tiny.match);
  CHECK(tiny.terms.size() == 1);
}

TEST_CASE("lhs coefficients are integers") {
  auto p = provider();
  IdentityReport rep = verify_main_identity(build_root_datum("B2"), make_rational(4), p);
  for (const auto& [e, c] : rep.lhs->terms()) CHECK(is_integer(c));
}

TEST_CASE("kostant classical identity") {
  auto p = provider();
  IdentityReport a1 = verify_kostant_classical(build_root_datum("A1"), make_rational(10), p);
  CHECK(a1.match);
  // the A1 instance is Jacobi's identity in x
  CHECK(a1.lhs->eq_to_cutoff(jacobi_cube_series(make_rational(10))));

  IdentityReport a2 = verify_kostant_classical(build_root_datum("A2"), make_rational(4), p);
  CHECK(a2.match);
  CHECK(a2.lhs->eq_to_cutoff(euler_phi(make_rational(1), make_rational(4)).pow(8)));

  // non-simply-laced instance exercises fractional exponents end to end
  IdentityReport g2 = verify_kostant_classical(build_root_datum("G2"), make_rational(3, 2), p);
  CHECK(g2.match);
  bool saw_fractional = false;
  for (const auto& [e, c] : g2.lhs->terms())
    if (!is_integer(e)) saw_fractional = true;
  CHECK(saw_fractional);

  IdentityReport tiny = verify_kostant_classical(build_root_datum("A2"), make_rational(1, 4), p);
  CHECK(tiny.match);
}

TEST_CASE("two-variable series") {
  auto p = provider();
  IdentityReport a1 = two_variable_series(build_root_datum("A1"), make_rational(4), p);
  CHECK(a1.match);
  // LHS = 1 - 3 q^2 t + 5 q^6 t^3 - ...
  CHECK(a1.bi_lhs->terms.at(Rational(0)) == LaurentPoly(1));
  CHECK(a1.bi_lhs->terms.at(Rational(1)) == LaurentPoly::monomial(2, make_rational(-3)));
  CHECK(a1.bi_lhs->terms.at(Rational(3)) == LaurentPoly::monomial(6, make_rational(5)));
  CHECK(a1.bi_lhs->terms.count(Rational(2)) == 0);

  IdentityReport a2 = two_variable_series(build_root_datum("A2"), make_rational(2), p);
  CHECK(a2.match);
  CHECK(a2.bi_lhs->terms.at(Rational(1)) == LaurentPoly::monomial(2, make_rational(-8)));

  IdentityReport tiny = two_variable_series(build_root_datum("A1"), make_rational(1, 8), p);
  CHECK(tiny.match);
}

TEST_CASE("theta scalar report on the A2 adjoint") {
  auto a2 = build_root_datum("A2");
  IrrModule adj = build_module(a2, {1, 1});
  ThetaScalarReport rep = verify_theta_scalars(adj);
  INFO(rep.checks.first_failure());
  CHECK(rep.pass());
  CHECK(rep.has_zero_space);
  CHECK(rep.exp_highest == 4);
  CHECK(rep.exp_zero == 6);
  CHECK(rep.c_highest == 1);
  CHECK(rep.c_zero == 1);
  // eigenvalue multiset q^4 x6, q^6 x2
  int outer = 0, inner = 0;
  for (const auto& [mu, mult, scalar] : rep.eigen_structure) {
    REQUIRE(scalar.has_value());
    if (*scalar == LaurentPoly::monomial(4)) outer += mult;
    if (*scalar == LaurentPoly::monomial(6)) inner += mult;
  }
  CHECK(outer == 6);
  CHECK(inner == 2);
}

TEST_CASE("theta scalar reports across types") {
  auto p = provider();
  struct Case { const char* type; Weight lam; };
  const Case cases[] = {{"A1", {0}}, {"A1", {2}}, {"A1", {3}}, {"A2", {2, 1}},
                        {"B2", {0, 2}}, {"B2", {0, 1}}, {"G2", {1, 0}}};
  for (const auto& c : cases) {
    CAPTURE(c.type);
    CAPTURE(weight_str(c.lam));
    auto rd = build_root_datum(c.type);
    ThetaScalarReport rep = verify_theta_scalars(rd, c.lam, p);
    INFO(rep.checks.first_failure());
    CHECK(rep.pass());
  }
  // A1 n=2: scalars q^2 on v_lambda, q^4 on the zero space
  auto a1 = build_root_datum("A1");
  ThetaScalarReport r = verify_theta_scalars(a1, {2}, p);
  CHECK(r.exp_highest == 2);
  CHECK(r.exp_zero == 4);
}
