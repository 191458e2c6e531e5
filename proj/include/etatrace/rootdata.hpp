#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "etatrace/rational.hpp"

namespace etatrace {

struct SizeLimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Family : char { A = 'A', B = 'B', C = 'C', D = 'D', E = 'E', F = 'F', G = 'G' };

struct LieType {
  Family family;
  int rank;

  std::string str() const { return std::string(1, static_cast<char>(family)) + std::to_string(rank); }

  /// Parses "A1", "g2", ... and validates the rank restrictions per family.
  static LieType parse(const std::string& s) {
    if (s.size() < 2) throw std::invalid_argument("LieType: bad type string '" + s + "'");
    char f = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    if (f < 'A' || f > 'G') throw std::invalid_argument("LieType: unknown family '" + s + "'");
    int rank = 0;
    for (size_t i = 1; i < s.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(s[i])))
        throw std::invalid_argument("LieType: bad rank in '" + s + "'");
      rank = rank * 10 + (s[i] - '0');
    }
    LieType t{static_cast<Family>(f), rank};
    t.validate();
    return t;
  }

  void validate() const {
    bool ok = rank >= 1;
    switch (family) {
      case Family::A: break;
      case Family::B: ok = ok && rank >= 2; break;
      case Family::C: ok = ok && rank >= 2; break;
      case Family::D: ok = ok && rank >= 3; break;
      case Family::E: ok = rank >= 6 && rank <= 8; break;
      case Family::F: ok = rank == 4; break;
      case Family::G: ok = rank == 2; break;
    }
    if (!ok) throw std::invalid_argument("LieType: unsupported rank for family: " + str());
  }
};

/// Integral weight in fundamental-weight coordinates.
using Weight = std::vector<long>;
/// Element of the root lattice in simple-root coordinates.
using RootVec = std::vector<long>;

inline std::string weight_str(const Weight& w) {
  std::string s;
  for (size_t i = 0; i < w.size(); ++i) s += (i ? "," : "") + std::to_string(w[i]);
  return s;
}

inline Weight parse_weight(const std::string& s, int rank) {
  Weight w;
  std::string cur;
  for (char ch : std::string(s) + ",") {
    if (ch == ',') {
      if (cur.empty()) throw std::invalid_argument("weight: bad syntax '" + s + "'");
      w.push_back(std::stol(cur));
      cur.clear();
    } else if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '-' || ch == '+') {
      cur += ch;
    } else if (!std::isspace(static_cast<unsigned char>(ch))) {
      throw std::invalid_argument("weight: bad character in '" + s + "'");
    }
  }
  if (static_cast<int>(w.size()) != rank)
    throw std::invalid_argument("weight: expected " + std::to_string(rank) + " coordinates in '" + s + "'");
  return w;
}

/// Complete combinatorial data of a simple Lie type: Cartan matrix, the
/// symmetrized form, positive roots, and the constants h, k, r = k/h.
///
/// Conventions: Bourbaki numbering of simple roots; cartan[i][j] is
/// 2(a_i,a_j)/(a_i,a_i), so sym = diag(d) * cartan is the matrix of the
/// normalized bilinear form with (a_i,a_i) = 2 d_i; fundamental weights
/// satisfy (w_i, a_j^vee) = delta_ij.
struct RootDatum {
  LieType type;
  int rank = 0;
  std::vector<std::vector<long>> cartan;       // c[i][j]
  std::vector<long> d;                         // coprime symmetrizers
  std::vector<std::vector<long>> sym;          // A = D C, symmetric
  std::vector<std::vector<Rational>> w_gram;   // (w_i, w_j) = (D A^{-1} D)_{ij}
  std::vector<std::vector<Rational>> cartan_inv;
  std::vector<RootVec> positive_roots;         // simple-root coordinates, by height
  Weight rho;                                  // (1, ..., 1)
  long coxeter_number = 0;                     // h
  Rational killing_constant;                   // k, from the built-in table
  Rational rg;                                 // k/h

  long num_positive_roots() const { return static_cast<long>(positive_roots.size()); }
  long dim_g() const { return 2 * num_positive_roots() + rank; }

  // ---- bilinear form in the normalization (a_i, a_j) = d_i c_ij ----

  Rational inner_weights(const Weight& x, const Weight& y) const {
    check_dim(x); check_dim(y);
    Rational s(0);
    for (int i = 0; i < rank; ++i)
      for (int j = 0; j < rank; ++j)
        if (x[i] != 0 && y[j] != 0) s += w_gram[i][j] * x[i] * y[j];
    return s;
  }

  Rational inner_roots(const RootVec& x, const RootVec& y) const {
    check_dim(x); check_dim(y);
    Rational s(0);
    for (int i = 0; i < rank; ++i)
      for (int j = 0; j < rank; ++j)
        if (x[i] != 0 && y[j] != 0) s += sym[i][j] * x[i] * y[j];
    return s;
  }

  /// (x, beta) for x in weight coordinates, beta in root coordinates;
  /// reduces to sum_i x_i d_i beta_i since (w_i, a_j) = delta_ij d_j.
  Rational inner_weight_root(const Weight& x, const RootVec& beta) const {
    check_dim(x); check_dim(beta);
    Rational s(0);
    for (int i = 0; i < rank; ++i) s += Rational(x[i]) * d[i] * beta[i];
    return s;
  }

  /// <x, a_i^vee>: the i-th fundamental coordinate.
  long pairing_coroot(const Weight& x, int i) const { return x[static_cast<size_t>(i)]; }

  /// Weight coordinates of a root-lattice vector: C * beta.
  Weight root_to_weight(const RootVec& beta) const {
    check_dim(beta);
    Weight w(static_cast<size_t>(rank), 0);
    for (int i = 0; i < rank; ++i)
      for (int j = 0; j < rank; ++j) w[i] += cartan[i][j] * beta[j];
    return w;
  }

  /// Simple-root coordinates of a weight, as exact rationals.
  std::vector<Rational> weight_to_root_coords(const Weight& w) const {
    check_dim(w);
    std::vector<Rational> x(static_cast<size_t>(rank), Rational(0));
    for (int i = 0; i < rank; ++i)
      for (int j = 0; j < rank; ++j)
        if (w[j] != 0) x[i] += cartan_inv[i][j] * w[j];
    return x;
  }

  bool in_root_lattice(const Weight& w) const {
    for (const auto& c : weight_to_root_coords(w))
      if (!is_integer(c)) return false;
    return true;
  }

  bool is_dominant(const Weight& w) const {
    check_dim(w);
    return std::all_of(w.begin(), w.end(), [](long c) { return c >= 0; });
  }

  Weight simple_reflection(int i, const Weight& w) const {
    check_dim(w);
    Weight r = w;
    long c = w[static_cast<size_t>(i)];
    if (c != 0)
      for (int j = 0; j < rank; ++j) r[j] -= c * cartan[j][i];  // a_i has weight coords C[:,i]
    return r;
  }

  /// Coxeter element c = s_1 ... s_l applied to a weight, rightmost first.
  Weight coxeter_apply(const Weight& w) const {
    Weight r = w;
    for (int i = rank - 1; i >= 0; --i) r = simple_reflection(i, r);
    return r;
  }

  // ---- exponents of the trace identities ----

  Rational quadratic(const Weight& lam) const {  // (lam, lam + 2 rho)
    return inner_weights(lam, lam) + 2 * inner_weights(lam, rho);
  }
  Rational exponent_main(const Weight& lam) const { return quadratic(lam) / coxeter_number; }
  Rational c_lambda(const Weight& lam) const { return quadratic(lam) / killing_constant; }

  /// Weyl dimension formula, exact.
  Int weyl_dim(const Weight& lam) const {
    if (!is_dominant(lam)) throw std::invalid_argument("weyl_dim: weight not dominant");
    Rational num(1), den(1);
    Weight lam_rho = lam;
    for (auto& c : lam_rho) c += 1;
    for (const auto& beta : positive_roots) {
      num *= inner_weight_root(lam_rho, beta);
      den *= inner_weight_root(rho, beta);
    }
    Rational dim = num / den;
    if (!is_integer(dim)) throw std::logic_error("weyl_dim: non-integer result");
    return dim.get_num();
  }

  /// Full weight diagram with multiplicities by the Freudenthal recursion.
  std::map<Weight, long> freudenthal_multiplicities(const Weight& lam) const {
    if (!is_dominant(lam)) throw std::invalid_argument("freudenthal: weight not dominant");
    std::map<Weight, long> mult;
    mult[lam] = 1;
    Weight lam_rho = lam;
    for (auto& c : lam_rho) c += 1;
    Rational top_norm = inner_weights(lam_rho, lam_rho);
    std::vector<Weight> alpha_w(static_cast<size_t>(rank));
    for (int i = 0; i < rank; ++i) {
      RootVec e(static_cast<size_t>(rank), 0);
      e[static_cast<size_t>(i)] = 1;
      alpha_w[static_cast<size_t>(i)] = root_to_weight(e);
    }
    std::vector<Weight> level = {lam};
    while (!level.empty()) {
      std::set<Weight> next_set;
      for (const auto& nu : level)
        for (int i = 0; i < rank; ++i) {
          Weight mu = nu;
          for (int j = 0; j < rank; ++j) mu[j] -= alpha_w[static_cast<size_t>(i)][j];
          if (!mult.count(mu)) next_set.insert(mu);
        }
      std::vector<Weight> next;
      for (const auto& mu : next_set) {
        Weight mu_rho = mu;
        for (auto& c : mu_rho) c += 1;
        Rational denom = top_norm - inner_weights(mu_rho, mu_rho);
        if (sgn(denom) == 0) continue;  // not a weight of the module
        Rational acc(0);
        for (const auto& beta : positive_roots) {
          Weight beta_w = root_to_weight(beta);
          Rational bb = inner_roots(beta, beta);
          Rational mu_b = inner_weight_root(mu, beta);
          for (long j = 1;; ++j) {
            Weight up = mu;
            for (int t = 0; t < rank; ++t) up[t] += j * beta_w[t];
            auto it = mult.find(up);
            if (it == mult.end()) break;  // root strings are contiguous
            acc += Rational(2 * it->second) * (mu_b + j * bb);
          }
        }
        Rational m = acc / denom;
        if (!is_integer(m) || sgn(m) < 0) throw std::logic_error("freudenthal: non-integral multiplicity");
        long mv = to_long(m);
        if (mv > 0) {
          mult[mu] = mv;
          next.push_back(mu);
        }
      }
      level = std::move(next);
    }
    return mult;
  }

  /// All dominant weights with (lam, lam+2rho)/h < cutoff, sorted by
  /// (exponent, coordinates). Finite by positive-definiteness.
  std::vector<Weight> enumerate_contributing_weights(const Rational& cutoff) const {
    if (sgn(cutoff) <= 0) throw std::invalid_argument("enumerate_contributing_weights: cutoff must be positive");
    Rational bound = cutoff * coxeter_number;
    std::vector<Weight> out;
    Weight cur(static_cast<size_t>(rank), 0);
    scan_dominant(cur, 0, [&](const Weight& w) { return quadratic(w) < bound; }, out);
    std::sort(out.begin(), out.end(), [&](const Weight& a, const Weight& b) {
      Rational ea = quadratic(a), eb = quadratic(b);
      if (ea != eb) return ea < eb;
      return a < b;
    });
    return out;
  }

  /// All dominant weights of module dimension at most `bound`, sorted by
  /// (dimension, coordinates).
  std::vector<Weight> enumerate_weights_dim_at_most(const Int& bound) const {
    std::vector<Weight> out;
    Weight cur(static_cast<size_t>(rank), 0);
    scan_dominant(cur, 0, [&](const Weight& w) { return weyl_dim(w) <= bound; }, out);
    std::sort(out.begin(), out.end(), [&](const Weight& a, const Weight& b) {
      Int da = weyl_dim(a), db = weyl_dim(b);
      if (da != db) return da < db;
      return a < b;
    });
    return out;
  }

  /// Braid relation length m_ij from c_ij c_ji = 0,1,2,3.
  int braid_m(int i, int j) const {
    long p = cartan[i][j] * cartan[j][i];
    switch (p) {
      case 0: return 2;
      case 1: return 3;
      case 2: return 4;
      case 3: return 6;
      default: throw std::logic_error("braid_m: invalid Cartan product");
    }
  }

 private:
  void check_dim(const std::vector<long>& v) const {
    if (static_cast<int>(v.size()) != rank) throw std::invalid_argument("RootDatum: dimension mismatch");
  }

  // Recursive box scan; both predicates are monotone decreasing in each
  // coordinate, which justifies the break.
  template <class Pred>
  void scan_dominant(Weight& cur, int pos, const Pred& keep, std::vector<Weight>& out) const {
    if (pos == rank) {
      if (keep(cur)) out.push_back(cur);
      return;
    }
    for (long a = 0;; ++a) {
      cur[static_cast<size_t>(pos)] = a;
      bool tail_ok = [&] {
        Weight probe = cur;
        for (int j = pos + 1; j < rank; ++j) probe[static_cast<size_t>(j)] = 0;
        return keep(probe);
      }();
      if (!tail_ok) break;
      scan_dominant(cur, pos + 1, keep, out);
    }
    cur[static_cast<size_t>(pos)] = 0;
  }
};

namespace detail {

inline std::vector<std::vector<long>> cartan_matrix(const LieType& t) {
  int l = t.rank;
  std::vector<std::vector<long>> c(static_cast<size_t>(l), std::vector<long>(static_cast<size_t>(l), 0));
  for (int i = 0; i < l; ++i) c[i][i] = 2;
  auto link = [&](int i, int j) { c[i][j] = -1; c[j][i] = -1; };
  switch (t.family) {
    case Family::A:
      for (int i = 0; i + 1 < l; ++i) link(i, i + 1);
      break;
    case Family::B:  // alpha_l short
      for (int i = 0; i + 1 < l; ++i) link(i, i + 1);
      c[l - 1][l - 2] = -2;
      break;
    case Family::C:  // alpha_l long
      for (int i = 0; i + 1 < l; ++i) link(i, i + 1);
      c[l - 2][l - 1] = -2;
      break;
    case Family::D:
      for (int i = 0; i + 1 < l - 1; ++i) link(i, i + 1);
      link(l - 3, l - 1);
      break;
    case Family::E:
      // Bourbaki: chain 1-3-4-5-6(-7)(-8), node 2 attached to node 4
      link(0, 2); link(2, 3); link(3, 4); link(4, 5);
      if (l >= 7) link(5, 6);
      if (l >= 8) link(6, 7);
      link(1, 3);
      break;
    case Family::F:  // alpha_1, alpha_2 long
      link(0, 1); link(1, 2); link(2, 3);
      c[2][1] = -2;
      break;
    case Family::G:  // alpha_1 short
      c[0][1] = -3;
      c[1][0] = -1;
      break;
  }
  return c;
}

inline std::vector<long> symmetrizers(const LieType& t) {
  int l = t.rank;
  std::vector<long> d(static_cast<size_t>(l), 1);
  switch (t.family) {
    case Family::B:
      for (int i = 0; i < l - 1; ++i) d[i] = 2;
      break;
    case Family::C:
      d[l - 1] = 2;
      break;
    case Family::F:
      d[0] = d[1] = 2;
      break;
    case Family::G:
      d[1] = 3;
      break;
    default:
      break;
  }
  return d;
}

// h and k transcribed from the type table; r = k/h.
inline void coxeter_table(const LieType& t, long& h, Rational& k) {
  long l = t.rank;
  switch (t.family) {
    case Family::A: h = l + 1; k = make_rational(2 * (l + 1)); return;
    case Family::B: h = 2 * l; k = make_rational(4 * l - 2); return;
    case Family::C: h = 2 * l; k = make_rational(4 * l + 4); return;
    case Family::D: h = 2 * l - 2; k = make_rational(4 * l - 4); return;
    case Family::E:
      if (l == 6) { h = 12; k = make_rational(24); return; }
      if (l == 7) { h = 18; k = make_rational(36); return; }
      h = 30; k = make_rational(60); return;
    case Family::F: h = 12; k = make_rational(18); return;
    case Family::G: h = 6; k = make_rational(24); return;
  }
  throw std::logic_error("coxeter_table: unreachable");
}

inline std::vector<std::vector<Rational>> invert_rational(std::vector<std::vector<Rational>> m) {
  size_t n = m.size();
  std::vector<std::vector<Rational>> inv(n, std::vector<Rational>(n, Rational(0)));
  for (size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    while (piv < n && sgn(m[piv][col]) == 0) ++piv;
    if (piv == n) throw std::logic_error("invert_rational: singular matrix");
    std::swap(m[piv], m[col]);
    std::swap(inv[piv], inv[col]);
    Rational p = m[col][col];
    for (size_t j = 0; j < n; ++j) { m[col][j] /= p; inv[col][j] /= p; }
    for (size_t r = 0; r < n; ++r) {
      if (r == col || sgn(m[r][col]) == 0) continue;
      Rational f = m[r][col];
      for (size_t j = 0; j < n; ++j) { m[r][j] -= f * m[col][j]; inv[r][j] -= f * inv[col][j]; }
    }
  }
  return inv;
}

}  // namespace detail

inline RootDatum build_root_datum(const LieType& t) {
  t.validate();
  RootDatum rd;
  rd.type = t;
  rd.rank = t.rank;
  rd.cartan = detail::cartan_matrix(t);
  rd.d = detail::symmetrizers(t);
  int l = rd.rank;
  rd.sym.assign(static_cast<size_t>(l), std::vector<long>(static_cast<size_t>(l), 0));
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < l; ++j) rd.sym[i][j] = rd.d[i] * rd.cartan[i][j];
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < l; ++j)
      if (rd.sym[i][j] != rd.sym[j][i]) throw std::logic_error("build_root_datum: DC not symmetric");

  std::vector<std::vector<Rational>> c_rat(static_cast<size_t>(l), std::vector<Rational>(static_cast<size_t>(l)));
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < l; ++j) c_rat[i][j] = make_rational(rd.cartan[i][j]);
  rd.cartan_inv = detail::invert_rational(c_rat);

  // (w_i, w_j) = (D A^{-1} D)_{ij} where A = DC, i.e. d_i (C^{-1})_{ij} ... d_j / d_i:
  // A^{-1} = C^{-1} D^{-1}, so D A^{-1} D = D C^{-1}.
  rd.w_gram.assign(static_cast<size_t>(l), std::vector<Rational>(static_cast<size_t>(l)));
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < l; ++j) rd.w_gram[i][j] = Rational(rd.d[i]) * rd.cartan_inv[i][j];
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < l; ++j)
      if (rd.w_gram[i][j] != rd.w_gram[j][i]) throw std::logic_error("build_root_datum: weight Gram not symmetric");

  // positive roots by closure from the simple roots: beta + a_i is a root iff
  // the a_i-string through beta descends further than <beta, a_i^vee>
  std::set<RootVec> seen;
  std::vector<std::vector<RootVec>> layers;
  layers.emplace_back();
  for (int i = 0; i < l; ++i) {
    RootVec e(static_cast<size_t>(l), 0);
    e[static_cast<size_t>(i)] = 1;
    layers.back().push_back(e);
    seen.insert(e);
  }
  while (!layers.back().empty()) {
    std::vector<RootVec> next;
    for (const auto& beta : layers.back()) {
      for (int i = 0; i < l; ++i) {
        long pairing = 0;
        for (int j = 0; j < l; ++j) pairing += rd.cartan[i][j] * beta[j];
        long p = 0;  // depth of the root string below beta
        RootVec down = beta;
        while (true) {
          down[static_cast<size_t>(i)] -= 1;
          bool nonneg = std::all_of(down.begin(), down.end(), [](long c) { return c >= 0; });
          if (nonneg && seen.count(down)) { ++p; continue; }
          break;
        }
        if (p - pairing > 0) {
          RootVec up = beta;
          up[static_cast<size_t>(i)] += 1;
          if (seen.insert(up).second) next.push_back(up);
        }
      }
    }
    layers.push_back(std::move(next));
  }
  for (const auto& layer : layers)
    for (const auto& beta : layer) rd.positive_roots.push_back(beta);

  rd.rho.assign(static_cast<size_t>(l), 1);
  detail::coxeter_table(t, rd.coxeter_number, rd.killing_constant);
  rd.rg = rd.killing_constant / rd.coxeter_number;

  // cross-check h against the highest root
  long max_height = 0;
  for (const auto& beta : rd.positive_roots) {
    long ht = 0;
    for (long c : beta) ht += c;
    max_height = std::max(max_height, ht);
  }
  if (rd.coxeter_number != max_height + 1)
    throw std::logic_error("build_root_datum: table h inconsistent with highest root");
  return rd;
}

inline RootDatum build_root_datum(const std::string& type_string) {
  return build_root_datum(LieType::parse(type_string));
}

}  // namespace etatrace
