#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "etatrace/braid.hpp"
#include "etatrace/parallel.hpp"
#include "etatrace/qseries.hpp"

namespace etatrace {

/// How identity drivers obtain modules; the cache layer substitutes its own
/// builder. Thread count controls the per-weight parallelism.
struct ModuleProvider {
  Int size_limit = Int(600);
  int threads = 1;
  std::function<IrrModule(const RootDatum&, const Weight&, const Int&)> build =
      [](const RootDatum& rd, const Weight& lam, const Int& limit) { return build_module(rd, lam, limit); };

  IrrModule get(const RootDatum& rd, const Weight& lam) const { return build(rd, lam, size_limit); }
};

/// One lambda summand of the trace identities.
struct TraceTerm {
  Weight lambda;
  Int dim;
  int epsilon = 0;
  Rational exponent;  // (lambda, lambda + 2 rho)/h
  Rational c_lambda;  // (lambda, lambda + 2 rho)/k
};

/// Builds V(lambda), computes Tr(Pi, V(lambda)) exactly and verifies the
/// trace theorem against the independent classical route:
///   Tr(Pi, V) = Tr(Pi, V_0) = epsilon(lambda) q^{(lambda,lambda+2rho)/h}
/// with epsilon from the zero-space Coxeter trace of V_1(lambda).
/// When `prune_outside_root_lattice` is set, lambda outside Q returns an
/// epsilon = 0 term without building anything.
inline TraceTerm quantum_trace_term(const RootDatum& rd, const Weight& lambda, const ModuleProvider& provider,
                                    bool prune_outside_root_lattice = true) {
  TraceTerm term;
  term.lambda = lambda;
  term.dim = rd.weyl_dim(lambda);
  term.exponent = rd.exponent_main(lambda);
  term.c_lambda = rd.c_lambda(lambda);
  bool in_q = rd.in_root_lattice(lambda);
  if (!in_q && prune_outside_root_lattice) {
    term.epsilon = 0;
    return term;
  }

  IrrModule mod = provider.get(rd, lambda);
  BraidOperator pi = coxeter_operator(mod);
  RatFunc tr = trace(pi);

  // Pi permutes weight spaces like the Coxeter element, fixing only 0
  for (const auto& [mu, idx] : mod.weight_spaces) {
    bool is_zero_wt = std::all_of(mu.begin(), mu.end(), [](long c) { return c == 0; });
    if (rd.coxeter_apply(mu) == mu && !is_zero_wt)
      throw std::logic_error("quantum_trace_term: Coxeter element fixes a nonzero weight");
  }

  // Tr(Pi, V) = Tr(Pi, V_0)
  Weight zero(static_cast<size_t>(rd.rank), 0);
  RatFunc tr0 = mod.weight_space_indices(zero).empty() ? RatFunc() : trace_on_weight(pi, mod, zero);
  if (tr != tr0) throw std::logic_error("quantum_trace_term: full trace differs from zero-space trace");

  int eps = epsilon_classical(rd, lambda, provider.size_limit);
  RatFunc expected;
  if (eps != 0) {
    if (!is_integer(term.exponent))
      throw std::logic_error("quantum_trace_term: nonzero trace at fractional exponent");
    expected = RatFunc(LaurentPoly::monomial(to_long(term.exponent), make_rational(eps)));
  }
  if (tr != expected)
    throw std::logic_error("quantum_trace_term: trace of Pi differs from epsilon * q^((lambda,lambda+2rho)/h) at " +
                           rd.type.str() + " [" + weight_str(lambda) + "]");
  term.epsilon = eps;
  return term;
}

/// Left side of the main identity: sum over contributing dominant weights of
/// epsilon(lambda) dim V(lambda) q^{(lambda,lambda+2rho)/h}, truncated.
inline std::pair<QSeries, std::vector<TraceTerm>> lhs_series(const RootDatum& rd, const Rational& cutoff,
                                                             const ModuleProvider& provider) {
  std::vector<Weight> lams = rd.enumerate_contributing_weights(cutoff);
  std::vector<TraceTerm> terms = parallel_map<Weight, TraceTerm>(
      lams, [&](const Weight& lam) { return quantum_trace_term(rd, lam, provider); }, provider.threads);
  QSeries s(cutoff);
  for (const auto& t : terms)
    if (t.epsilon != 0) s.add_term(t.exponent, Rational(t.dim) * t.epsilon);
  return {std::move(s), std::move(terms)};
}

/// Right side: (prod_i phi(q^{(a_i,a_i)}))^{h+1} truncated.
inline QSeries rhs_series(const RootDatum& rd, const Rational& cutoff) {
  QSeries prod = QSeries::constant(Rational(1), cutoff);
  for (int i = 0; i < rd.rank; ++i) prod = prod * euler_phi(make_rational(2 * rd.d[static_cast<size_t>(i)]), cutoff);
  return prod.pow(rd.coxeter_number + 1);
}

struct Discrepancy {
  std::string exponent, lhs, rhs;
};

/// Two-variable series in t with exact Laurent-polynomial q-coefficients.
struct BiSeries {
  Rational cutoff_t;
  std::map<Rational, LaurentPoly> terms;

  explicit BiSeries(Rational cutoff) : cutoff_t(std::move(cutoff)) {}

  void add(const Rational& te, const LaurentPoly& c) {
    if (te >= cutoff_t || c.is_zero()) return;
    auto [it, inserted] = terms.emplace(te, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms.erase(it);
    }
  }

  /// Multiplies by (1 - q^a t^b).
  void mul_factor(long a, const Rational& b) {
    BiSeries next(cutoff_t);
    for (const auto& [te, c] : terms) {
      next.add(te, c);
      next.add(te + b, -(c * LaurentPoly::monomial(a)));
    }
    *this = std::move(next);
  }

  std::optional<Discrepancy> first_discrepancy(const BiSeries& o) const {
    Rational bound = std::min(cutoff_t, o.cutoff_t);
    auto all_keys = terms;
    for (const auto& [te, c] : o.terms) all_keys.emplace(te, LaurentPoly());
    for (const auto& [te, unused] : all_keys) {
      if (te >= bound) break;
      auto ia = terms.find(te);
      auto ib = o.terms.find(te);
      LaurentPoly a = ia == terms.end() ? LaurentPoly() : ia->second;
      LaurentPoly b = ib == o.terms.end() ? LaurentPoly() : ib->second;
      if (a != b) {
        Discrepancy d;
        d.exponent = "t^(" + te.get_str() + ")";
        d.lhs = a.str();
        d.rhs = b.str();
        return d;
      }
    }
    return std::nullopt;
  }
};

/// Verification record for one identity run.
struct IdentityReport {
  std::string identity;
  std::string type;
  Rational cutoff;
  bool match = false;
  std::optional<Discrepancy> first_discrepancy;
  std::optional<QSeries> lhs, rhs;
  std::optional<BiSeries> bi_lhs, bi_rhs;
  std::vector<TraceTerm> terms;
  long wall_time_ms = 0;
};

namespace detail {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  long ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

inline void fill_discrepancy(IdentityReport& rep) {
  if (rep.lhs && rep.rhs) {
    auto d = rep.lhs->first_discrepancy(*rep.rhs);
    rep.match = !d.has_value();
    if (d) {
      Discrepancy dd;
      dd.exponent = std::get<0>(*d).get_str();
      dd.lhs = std::get<1>(*d).get_str();
      dd.rhs = std::get<2>(*d).get_str();
      rep.first_discrepancy = dd;
    }
  } else if (rep.bi_lhs && rep.bi_rhs) {
    rep.first_discrepancy = rep.bi_lhs->first_discrepancy(*rep.bi_rhs);
    rep.match = !rep.first_discrepancy.has_value();
  }
}

}  // namespace detail

/// Main identity: trace side against (prod_i phi(q^{(a_i,a_i)}))^{h+1}.
inline IdentityReport verify_main_identity(const RootDatum& rd, const Rational& cutoff,
                                           const ModuleProvider& provider) {
  detail::Stopwatch watch;
  IdentityReport rep;
  rep.identity = "main";
  rep.type = rd.type.str();
  rep.cutoff = cutoff;
  auto [lhs, terms] = lhs_series(rd, cutoff, provider);
  rep.lhs = std::move(lhs);
  rep.terms = std::move(terms);
  rep.rhs = rhs_series(rd, cutoff);
  detail::fill_discrepancy(rep);
  rep.wall_time_ms = watch.ms();
  return rep;
}

/// Classical identity: (prod_i phi(x^{h Phi(a_i,a_i)}))^{h+1} against the sum
/// of epsilon(lambda) dim V_1(lambda) x^{c(lambda)}, using only classical
/// modules. Exponents h Phi(a_i,a_i) = 2 d_i h / k may be fractional.
inline IdentityReport verify_kostant_classical(const RootDatum& rd, const Rational& cutoff,
                                               const ModuleProvider& provider) {
  detail::Stopwatch watch;
  IdentityReport rep;
  rep.identity = "kostant";
  rep.type = rd.type.str();
  rep.cutoff = cutoff;

  QSeries lhs = QSeries::constant(Rational(1), cutoff);
  for (int i = 0; i < rd.rank; ++i) {
    Rational scale = Rational(2 * rd.d[static_cast<size_t>(i)]) * rd.coxeter_number / rd.killing_constant;
    lhs = lhs * euler_phi(scale, cutoff);
  }
  lhs = lhs.pow(rd.coxeter_number + 1);
  rep.lhs = std::move(lhs);

  // dominant lambda with c(lambda) < cutoff, i.e. (lambda,lambda+2rho) < cutoff*k
  std::vector<Weight> lams = rd.enumerate_contributing_weights(cutoff * rd.killing_constant / rd.coxeter_number);
  std::vector<TraceTerm> terms = parallel_map<Weight, TraceTerm>(
      lams,
      [&](const Weight& lam) {
        TraceTerm t;
        t.lambda = lam;
        t.dim = rd.weyl_dim(lam);
        t.exponent = rd.exponent_main(lam);
        t.c_lambda = rd.c_lambda(lam);
        t.epsilon = rd.in_root_lattice(lam) ? epsilon_classical(rd, lam, provider.size_limit) : 0;
        return t;
      },
      provider.threads);
  QSeries rhs(cutoff);
  for (const auto& t : terms)
    if (t.epsilon != 0) rhs.add_term(t.c_lambda, Rational(t.dim) * t.epsilon);
  rep.rhs = std::move(rhs);
  rep.terms = std::move(terms);
  detail::fill_discrepancy(rep);
  rep.wall_time_ms = watch.ms();
  return rep;
}

/// Two-variable refinement: sum_lambda Tr(Pi, V(lambda)) dim V(lambda) t^{c(lambda)}
/// against (prod_i phi((q^k t^h)^{Phi(a_i,a_i)}))^{h+1}, expanded in t.
inline IdentityReport two_variable_series(const RootDatum& rd, const Rational& cutoff_t,
                                          const ModuleProvider& provider) {
  detail::Stopwatch watch;
  IdentityReport rep;
  rep.identity = "two-var";
  rep.type = rd.type.str();
  rep.cutoff = cutoff_t;

  std::vector<Weight> lams = rd.enumerate_contributing_weights(cutoff_t * rd.killing_constant / rd.coxeter_number);
  std::vector<TraceTerm> terms = parallel_map<Weight, TraceTerm>(
      lams, [&](const Weight& lam) { return quantum_trace_term(rd, lam, provider); }, provider.threads);
  BiSeries lhs(cutoff_t);
  for (const auto& t : terms) {
    if (t.epsilon == 0) continue;
    LaurentPoly c = LaurentPoly::monomial(to_long(t.exponent), Rational(t.dim) * t.epsilon);
    lhs.add(t.c_lambda, c);
  }
  rep.terms = std::move(terms);

  // factor i, n: 1 - q^{2 d_i n} t^{2 d_i h n / k}
  BiSeries rhs(cutoff_t);
  rhs.add(Rational(0), LaurentPoly(1));
  for (int rep_pow = 0; rep_pow < rd.coxeter_number + 1; ++rep_pow)
    for (int i = 0; i < rd.rank; ++i)
      for (long n = 1;; ++n) {
        long a = 2 * rd.d[static_cast<size_t>(i)] * n;
        Rational b = Rational(a) * rd.coxeter_number / rd.killing_constant;
        if (b >= cutoff_t) break;
        rhs.mul_factor(a, b);
      }
  rep.bi_lhs = std::move(lhs);
  rep.bi_rhs = std::move(rhs);
  detail::fill_discrepancy(rep);
  rep.wall_time_ms = watch.ms();
  return rep;
}

/// Scalar action of theta = Pi^h: the checks of the central-element
/// propositions plus the observed per-weight-space eigenvalue structure.
struct ThetaScalarReport {
  Weight lambda;
  int c_highest = 0;                 // theta v_lambda = c q^{(lambda, 2rho)} v_lambda
  int c_zero = 0;                    // theta|_{V_0} = c q^{(lambda, lambda+2rho)}, 0 if V_0 empty
  bool has_zero_space = false;
  Rational exp_highest;              // (lambda, 2rho)
  Rational exp_zero;                 // (lambda, lambda + 2rho)
  // per weight space: weight, multiplicity, the scalar if the block is scalar
  std::vector<std::tuple<Weight, int, std::optional<LaurentPoly>>> eigen_structure;
  RelationReport checks;
  bool pass() const { return checks.all_pass(); }
};

inline ThetaScalarReport verify_theta_scalars(const IrrModule& mod) {
  const RootDatum& rd = mod.datum;
  ThetaScalarReport rep;
  rep.lambda = mod.lambda;
  rep.exp_highest = 2 * rd.inner_weights(mod.lambda, rd.rho);
  rep.exp_zero = rd.quadratic(mod.lambda);

  BraidOperator theta = theta_operator(mod);

  // theta preserves every weight space; collect blocks
  bool invariant = true;
  for (const auto& [mu, idx] : mod.weight_spaces) {
    std::vector<bool> inside(static_cast<size_t>(mod.dim), false);
    for (int t : idx) inside[static_cast<size_t>(t)] = true;
    for (int c : idx)
      for (const auto& [r, v] : theta.mat.column(c))
        if (!inside[static_cast<size_t>(r)]) invariant = false;
    DenseMat<RatFunc> block = theta.mat.block(idx, idx);
    std::optional<LaurentPoly> scalar;
    bool is_scalar = true;
    RatFunc s = block.rows() > 0 ? block.at(0, 0) : RatFunc();
    for (int a = 0; a < block.rows() && is_scalar; ++a)
      for (int b = 0; b < block.cols(); ++b)
        if ((a == b && block.at(a, b) != s) || (a != b && !block.at(a, b).is_zero())) { is_scalar = false; break; }
    if (is_scalar && !s.is_zero() && s.is_laurent() && s.num().is_monomial()) scalar = s.num();
    rep.eigen_structure.emplace_back(mu, static_cast<int>(idx.size()), scalar);
  }
  rep.checks.add("theta preserves weight spaces", invariant);

  // theta v_lambda = c q^{(lambda, 2rho)} v_lambda, c in {+-1}
  bool hw_ok = false;
  if (is_integer(rep.exp_highest)) {
    const auto& col0 = theta.mat.column(0);
    if (col0.size() == 1 && col0[0].first == 0) {
      long e = to_long(rep.exp_highest);
      if (col0[0].second == RatFunc(LaurentPoly::monomial(e))) { rep.c_highest = 1; hw_ok = true; }
      if (col0[0].second == RatFunc(LaurentPoly::monomial(e, make_rational(-1)))) { rep.c_highest = -1; hw_ok = true; }
    }
  }
  rep.checks.add("theta scalar on highest-weight vector", hw_ok);

  // theta|_{V_0} = c q^{(lambda, lambda+2rho)} identity
  Weight zero(static_cast<size_t>(rd.rank), 0);
  auto zero_idx = mod.weight_space_indices(zero);
  rep.has_zero_space = !zero_idx.empty();
  if (rep.has_zero_space) {
    bool zero_ok = false;
    if (is_integer(rep.exp_zero)) {
      long e = to_long(rep.exp_zero);
      DenseMat<RatFunc> block = theta.mat.block(zero_idx, zero_idx);
      for (int sign : {1, -1}) {
        RatFunc expect(LaurentPoly::monomial(e, make_rational(sign)));
        bool all = true;
        for (int a = 0; a < block.rows() && all; ++a)
          for (int b = 0; b < block.cols(); ++b)
            if ((a == b && block.at(a, b) != expect) || (a != b && !block.at(a, b).is_zero())) { all = false; break; }
        if (all) { rep.c_zero = sign; zero_ok = true; break; }
      }
    }
    rep.checks.add("theta scalar on zero-weight space", zero_ok);
    rep.checks.add("highest-weight and zero-space constants agree", rep.c_zero == rep.c_highest);
  }
  return rep;
}

inline ThetaScalarReport verify_theta_scalars(const RootDatum& rd, const Weight& lambda,
                                              const ModuleProvider& provider) {
  return verify_theta_scalars(provider.get(rd, lambda));
}

}  // namespace etatrace
