#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "etatrace/module.hpp"

namespace etatrace {

/// Invertible operator on an IrrModule tagged with the braid word it
/// realizes (generator indices are 1-based in the word).
struct BraidOperator {
  std::vector<int> word;
  SparseMat<RatFunc> mat;
};

/// One irreducible U_{q_i}(sl2)-string inside a module: w_0 is i-highest,
/// w_k = F_i^{(k)} w_0. Vectors are stored per ambient weight space, in the
/// coordinate order of that space's basis indices.
struct IString {
  int i = 0;
  int n = 0;            // string length minus one, equals <top, a_i^vee>
  Weight top;           // weight of w_0
  std::vector<std::vector<RatFunc>> vecs;  // k -> coords inside weight space top - k a_i
  std::vector<RatFunc> scalars;            // w_k = scalars[k] * F_i^k w_0, i.e. 1/[k]_{q_i}!
};

namespace detail {

inline DenseMat<RatFunc> weight_block(const SparseMat<RatFunc>& mat, const std::vector<int>& rows,
                                      const std::vector<int>& cols) {
  return mat.block(rows, cols);
}

}  // namespace detail

/// Decomposes the module basis-index set into i-strings. The i-highest
/// vectors are an exact kernel basis of E_i per weight space.
inline std::vector<IString> istring_decompose(const IrrModule& m, int i) {
  std::vector<IString> out;
  const RootDatum& rd = m.datum;
  long total = 0;
  for (const auto& [mu, idx] : m.weight_spaces) {
    Weight up = mu;
    for (int j = 0; j < rd.rank; ++j) up[j] += rd.cartan[j][static_cast<size_t>(i)];
    auto up_idx = m.weight_space_indices(up);
    DenseMat<RatFunc> eblock(static_cast<int>(up_idx.size()), static_cast<int>(idx.size()));
    if (!up_idx.empty()) eblock = m.e_matrix(i).block(up_idx, idx);
    DenseMat<RatFunc> kernel = kernel_basis(eblock);
    if (kernel.cols() == 0) continue;
    long n = mu[static_cast<size_t>(i)];
    if (n < 0) throw std::logic_error("istring_decompose: i-highest vector at non-dominant i-weight");
    for (int c = 0; c < kernel.cols(); ++c) {
      IString s;
      s.i = i;
      s.n = static_cast<int>(n);
      s.top = mu;
      std::vector<RatFunc> w(static_cast<size_t>(idx.size()));
      for (int r = 0; r < kernel.rows(); ++r) w[static_cast<size_t>(r)] = kernel.at(r, c);
      s.vecs.push_back(w);
      s.scalars.push_back(RatFunc(1));
      Weight cur = mu;
      for (long k = 1; k <= n; ++k) {
        Weight next = cur;
        for (int j = 0; j < rd.rank; ++j) next[j] -= rd.cartan[j][static_cast<size_t>(i)];
        auto cur_idx = m.weight_space_indices(cur);
        auto next_idx = m.weight_space_indices(next);
        if (next_idx.empty()) throw std::logic_error("istring_decompose: string leaves the weight diagram");
        DenseMat<RatFunc> fb = m.f_matrix(i).block(next_idx, cur_idx);
        std::vector<RatFunc> fv = fb.apply(s.vecs.back());
        RatFunc inv_k = RatFunc(qnum(k, rd.d[static_cast<size_t>(i)])).inverse();
        for (auto& x : fv) x *= inv_k;
        s.vecs.push_back(std::move(fv));
        s.scalars.push_back(s.scalars.back() * inv_k);
        cur = next;
      }
      // the string must terminate exactly: F_i w_n = 0
      {
        Weight below = cur;
        for (int j = 0; j < rd.rank; ++j) below[j] -= rd.cartan[j][static_cast<size_t>(i)];
        auto below_idx = m.weight_space_indices(below);
        if (!below_idx.empty()) {
          DenseMat<RatFunc> fb = m.f_matrix(i).block(below_idx, m.weight_space_indices(cur));
          for (const auto& x : fb.apply(s.vecs.back()))
            if (!x.is_zero()) throw std::logic_error("istring_decompose: string does not terminate");
        }
      }
      total += n + 1;
      out.push_back(std::move(s));
    }
  }
  if (total != m.dim) throw std::logic_error("istring_decompose: strings do not partition the module");
  return out;
}

namespace detail {

// Per-weight change of basis between module coordinates and string vectors.
struct StringAtlas {
  // for each weight: the (string index, k) pairs whose vector lies there,
  // and the inverse of the matrix with those vectors as columns
  std::map<Weight, std::vector<std::pair<int, int>>> members;
  std::map<Weight, DenseMat<RatFunc>> inv_basis;

  StringAtlas(const IrrModule& m, const std::vector<IString>& strings) {
    const RootDatum& rd = m.datum;
    for (size_t s = 0; s < strings.size(); ++s) {
      Weight mu = strings[s].top;
      for (int k = 0; k <= strings[s].n; ++k) {
        members[mu].emplace_back(static_cast<int>(s), k);
        for (int j = 0; j < rd.rank; ++j) mu[j] -= rd.cartan[j][static_cast<size_t>(strings[s].i)];
      }
    }
    for (auto& [mu, mem] : members) {
      auto idx = m.weight_space_indices(mu);
      DenseMat<RatFunc> u(static_cast<int>(idx.size()), static_cast<int>(mem.size()));
      if (idx.size() != mem.size()) throw std::logic_error("string atlas: weight space size mismatch");
      for (size_t c = 0; c < mem.size(); ++c) {
        const auto& vec = strings[static_cast<size_t>(mem[c].first)].vecs[static_cast<size_t>(mem[c].second)];
        for (size_t r = 0; r < vec.size(); ++r) u.at(static_cast<int>(r), static_cast<int>(c)) = vec[r];
      }
      inv_basis.emplace(mu, invert(u));
    }
  }
};

// Assembles the operator sending w_{s,k} to coef(s,k) * w_{s, image_k(s,k)}.
template <class CoefFn>
SparseMat<RatFunc> string_diagonal_operator(const IrrModule& m, const std::vector<IString>& strings,
                                            const StringAtlas& atlas, const CoefFn& coef) {
  SparseMat<RatFunc> op(m.dim, m.dim);
  for (const auto& [mu, mem] : atlas.members) {
    auto idx = m.weight_space_indices(mu);
    int n_mu = static_cast<int>(idx.size());
    // W: columns are images of the string vectors at mu, in module coords
    // grouped by target weight; combine with U^{-1} per target weight.
    // Images may land in different weight spaces, so assemble per target.
    std::map<Weight, DenseMat<RatFunc>> images;  // target weight -> (rows of target space) x n_mu
    for (int c = 0; c < n_mu; ++c) {
      auto [s, k] = mem[static_cast<size_t>(c)];
      auto [target_k, scalar] = coef(strings[static_cast<size_t>(s)], k);
      // weight of w_{s, target_k}
      Weight tw = strings[static_cast<size_t>(s)].top;
      const RootDatum& rd = m.datum;
      for (int j = 0; j < rd.rank; ++j)
        tw[j] -= target_k * rd.cartan[j][static_cast<size_t>(strings[static_cast<size_t>(s)].i)];
      auto t_idx = m.weight_space_indices(tw);
      auto it = images.find(tw);
      if (it == images.end())
        it = images.emplace(tw, DenseMat<RatFunc>(static_cast<int>(t_idx.size()), n_mu)).first;
      const auto& vec = strings[static_cast<size_t>(s)].vecs[static_cast<size_t>(target_k)];
      for (size_t r = 0; r < vec.size(); ++r)
        if (!vec[r].is_zero()) it->second.at(static_cast<int>(r), c) = vec[r] * scalar;
    }
    const DenseMat<RatFunc>& u_inv = atlas.inv_basis.at(mu);
    for (const auto& [tw, img] : images) {
      DenseMat<RatFunc> block = img.mul(u_inv);
      auto t_idx = m.weight_space_indices(tw);
      for (int c = 0; c < n_mu; ++c)
        for (int r = 0; r < block.rows(); ++r)
          if (!block.at(r, c).is_zero()) op.set(t_idx[static_cast<size_t>(r)], idx[static_cast<size_t>(c)], block.at(r, c));
    }
  }
  return op;
}

}  // namespace detail

/// Quantum Weyl group operator S_i from the per-string closed form
/// S_i w_k = (-1)^{n-k} q_i^{(n-k)(k+1)} w_{n-k}.
inline BraidOperator s_operator(const IrrModule& m, int i) {
  auto strings = istring_decompose(m, i);
  detail::StringAtlas atlas(m, strings);
  long d = m.datum.d[static_cast<size_t>(i)];
  auto coef = [d](const IString& s, int k) {
    long nk = s.n - k;
    RatFunc c(LaurentPoly::monomial(d * nk * (k + 1), make_rational((nk % 2 == 0) ? 1 : -1)));
    return std::make_pair(static_cast<int>(nk), c);
  };
  return BraidOperator{{i + 1}, detail::string_diagonal_operator(m, strings, atlas, coef)};
}

/// Inverse of S_i, from the same strings: S_i^{-1} w_k = (-1)^k q_i^{-k(n-k+1)} w_{n-k}.
inline BraidOperator s_operator_inverse(const IrrModule& m, int i) {
  auto strings = istring_decompose(m, i);
  detail::StringAtlas atlas(m, strings);
  long d = m.datum.d[static_cast<size_t>(i)];
  auto coef = [d](const IString& s, int k) {
    long nk = s.n - k;
    RatFunc c(LaurentPoly::monomial(-d * k * (nk + 1), make_rational((k % 2 == 0) ? 1 : -1)));
    return std::make_pair(static_cast<int>(nk), c);
  };
  return BraidOperator{{-(i + 1)}, detail::string_diagonal_operator(m, strings, atlas, coef)};
}

namespace detail {

// exp_{q^{-1}} with q = q_i: sum_k q_i^{-k(k-1)/2} X^k / [k]_{q_i}!, finite
// because X is nilpotent.
inline SparseMat<RatFunc> qexp_inv(const SparseMat<RatFunc>& x, long d) {
  SparseMat<RatFunc> acc = SparseMat<RatFunc>::identity(x.rows());
  SparseMat<RatFunc> power = x;
  for (long k = 1; !power.is_zero(); ++k) {
    RatFunc coef(LaurentPoly::monomial(-d * k * (k - 1) / 2), qfactorial(k, d));
    acc = acc + power.scaled(coef);
    if (k > power.rows() + 1) throw std::logic_error("qexp_inv: operator is not nilpotent");
    power = power * x;
  }
  return acc;
}

}  // namespace detail

/// The same operator built from the defining triple q-exponential product
/// exp_{q_i^{-1}}(q_i^{-1} E K^{-1}) exp_{q_i^{-1}}(-F) exp_{q_i^{-1}}(q_i E K)
/// times the diagonal factor q_i^{m(m+1)/2} on the K_i = q_i^m eigenspace.
/// Serves as an independent oracle for s_operator.
inline BraidOperator s_operator_via_exponentials(const IrrModule& m, int i) {
  long d = m.datum.d[static_cast<size_t>(i)];
  SparseMat<RatFunc> e = m.e_matrix(i), f = m.f_matrix(i);
  SparseMat<RatFunc> k = m.k_matrix(i), k_inv = m.k_matrix(i, -1);
  SparseMat<RatFunc> a = (e * k_inv).scaled(RatFunc(LaurentPoly::monomial(-d)));
  SparseMat<RatFunc> b = f.scaled(RatFunc(-1));
  SparseMat<RatFunc> c = (e * k).scaled(RatFunc(LaurentPoly::monomial(d)));
  SparseMat<RatFunc> diag(m.dim, m.dim);
  for (int idx = 0; idx < m.dim; ++idx) {
    long mm = m.coroot_pairing(i, idx);
    diag.set(idx, idx, RatFunc(LaurentPoly::monomial(d * mm * (mm + 1) / 2)));
  }
  SparseMat<RatFunc> mat = detail::qexp_inv(a, d) * detail::qexp_inv(b, d) * detail::qexp_inv(c, d) * diag;
  return BraidOperator{{i + 1}, std::move(mat)};
}

/// Product in the written order: the leftmost operator acts last.
inline BraidOperator compose(const std::vector<BraidOperator>& ops) {
  if (ops.empty()) throw std::invalid_argument("compose: empty operator list");
  BraidOperator r = ops.front();
  for (size_t t = 1; t < ops.size(); ++t) {
    if (ops[t].mat.rows() != r.mat.cols()) throw std::invalid_argument("compose: dimension mismatch");
    r.mat = r.mat * ops[t].mat;
    r.word.insert(r.word.end(), ops[t].word.begin(), ops[t].word.end());
  }
  return r;
}

/// Coxeter element Pi = S_1 ... S_l.
inline BraidOperator coxeter_operator(const IrrModule& m) {
  std::vector<BraidOperator> ops;
  for (int i = 0; i < m.datum.rank; ++i) ops.push_back(s_operator(m, i));
  return compose(ops);
}

/// theta = Pi^h, the central braid group element, by repeated squaring.
inline BraidOperator theta_operator(const IrrModule& m) {
  BraidOperator pi = coxeter_operator(m);
  BraidOperator theta{{}, pi.mat.pow(static_cast<unsigned long>(m.datum.coxeter_number))};
  for (long t = 0; t < m.datum.coxeter_number; ++t)
    theta.word.insert(theta.word.end(), pi.word.begin(), pi.word.end());
  return theta;
}

/// Exact braid relation check S_i S_j S_i ... = S_j S_i S_j ... with m_ij
/// factors per side; vacuous in rank 1.
inline RelationReport verify_braid_relations(const IrrModule& m) {
  RelationReport rep;
  const RootDatum& rd = m.datum;
  std::vector<BraidOperator> s;
  for (int i = 0; i < rd.rank; ++i) s.push_back(s_operator(m, i));
  for (int i = 0; i < rd.rank; ++i)
    for (int j = i + 1; j < rd.rank; ++j) {
      int mij = rd.braid_m(i, j);
      SparseMat<RatFunc> lhs = SparseMat<RatFunc>::identity(m.dim);
      SparseMat<RatFunc> rhs = SparseMat<RatFunc>::identity(m.dim);
      for (int t = 0; t < mij; ++t) {
        lhs = lhs * (t % 2 == 0 ? s[static_cast<size_t>(i)].mat : s[static_cast<size_t>(j)].mat);
        rhs = rhs * (t % 2 == 0 ? s[static_cast<size_t>(j)].mat : s[static_cast<size_t>(i)].mat);
      }
      rep.add("braid relation (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") with m=" +
                  std::to_string(mij),
              lhs == rhs);
    }
  return rep;
}

/// Generator symbols for the Lusztig automorphism images.
enum class GenKind { E, F, K, KInv };

/// Matrix of T_i(g) on the module, from the defining divided-power formulas.
inline SparseMat<RatFunc> lusztig_T_on_generator(const IrrModule& m, int i, GenKind kind, int j) {
  const RootDatum& rd = m.datum;
  long d = rd.d[static_cast<size_t>(i)];
  long cij = rd.cartan[static_cast<size_t>(i)][static_cast<size_t>(j)];
  if (kind == GenKind::K || kind == GenKind::KInv) {
    // T_i(K_j) = K_j K_i^{-c_ij}
    SparseMat<RatFunc> r = m.k_matrix(j) * m.k_matrix(i, -1).pow(static_cast<unsigned long>(cij >= 0 ? cij : 0));
    if (cij < 0) r = m.k_matrix(j) * m.k_matrix(i).pow(static_cast<unsigned long>(-cij));
    if (kind == GenKind::K) return r;
    // inverse of a diagonal monomial matrix
    SparseMat<RatFunc> inv(m.dim, m.dim);
    for (int idx = 0; idx < m.dim; ++idx) inv.set(idx, idx, r.get(idx, idx).inverse());
    return inv;
  }
  if (i == j) {
    if (kind == GenKind::E) return (m.f_matrix(i) * m.k_matrix(i)).scaled(RatFunc(-1));
    return (m.k_matrix(i, -1) * m.e_matrix(i)).scaled(RatFunc(-1));
  }
  long bound = -cij;
  auto divided = [&](const SparseMat<RatFunc>& x, long p) {
    return x.pow(static_cast<unsigned long>(p)).scaled(RatFunc(qfactorial(p, d)).inverse());
  };
  SparseMat<RatFunc> acc(m.dim, m.dim);
  for (long k = 0; k <= bound; ++k) {
    RatFunc coef(LaurentPoly::monomial(kind == GenKind::E ? -d * k : d * k,
                                       make_rational((k % 2 == 0) ? 1 : -1)));
    SparseMat<RatFunc> term =
        kind == GenKind::E
            ? divided(m.e_matrix(i), bound - k) * m.e_matrix(j) * divided(m.e_matrix(i), k)
            : divided(m.f_matrix(i), k) * m.f_matrix(j) * divided(m.f_matrix(i), bound - k);
    acc = acc + term.scaled(coef);
  }
  return acc;
}

/// Prop-style check that T_i acts by conjugation with S_i on every generator.
inline RelationReport verify_ts_conjugation(const IrrModule& m, int i) {
  RelationReport rep;
  BraidOperator s = s_operator(m, i), s_inv = s_operator_inverse(m, i);
  rep.add("S_i S_i^-1 = 1", s.mat * s_inv.mat == SparseMat<RatFunc>::identity(m.dim));
  for (int j = 0; j < m.datum.rank; ++j) {
    auto conj = [&](const SparseMat<RatFunc>& g) { return s.mat * g * s_inv.mat; };
    rep.add("T(E" + std::to_string(j + 1) + ")",
            lusztig_T_on_generator(m, i, GenKind::E, j) == conj(m.e_matrix(j)));
    rep.add("T(F" + std::to_string(j + 1) + ")",
            lusztig_T_on_generator(m, i, GenKind::F, j) == conj(m.f_matrix(j)));
    rep.add("T(K" + std::to_string(j + 1) + ")",
            lusztig_T_on_generator(m, i, GenKind::K, j) == conj(m.k_matrix(j)));
    rep.add("T(K" + std::to_string(j + 1) + "^-1)",
            lusztig_T_on_generator(m, i, GenKind::KInv, j) == conj(m.k_matrix(j, -1)));
  }
  return rep;
}

/// Exact trace, optionally restricted to a weight space (which must be
/// invariant under the operator).
inline RatFunc trace(const BraidOperator& op) { return op.mat.trace(); }

inline RatFunc trace_on_weight(const BraidOperator& op, const IrrModule& m, const Weight& mu) {
  auto idx = m.weight_space_indices(mu);
  std::vector<bool> inside(static_cast<size_t>(m.dim), false);
  for (int t : idx) inside[static_cast<size_t>(t)] = true;
  for (int c : idx)
    for (const auto& [r, v] : op.mat.column(c))
      if (!inside[static_cast<size_t>(r)])
        throw std::invalid_argument("trace_on_weight: subspace is not invariant");
  RatFunc t(0);
  for (int c : idx) t += op.mat.get(c, c);
  return t;
}

// ---- classical side ----

namespace detail {

// exp(sign * X) v for nilpotent sparse X over the rationals
inline std::vector<Rational> exp_apply(const SparseMat<Rational>& x, int sign, std::vector<Rational> v) {
  std::vector<Rational> acc = v;
  for (long k = 1;; ++k) {
    v = x.apply(v);
    bool nonzero = false;
    Rational factor = make_rational(sign > 0 ? 1 : ((k % 2 == 0) ? 1 : -1));
    for (auto& c : v) {
      c /= k;
      if (sgn(c) != 0) nonzero = true;
    }
    if (!nonzero) break;
    for (size_t t = 0; t < v.size(); ++t) acc[t] += factor * v[t];
    if (k > x.rows() + 1) throw std::logic_error("exp_apply: operator is not nilpotent");
  }
  return acc;
}

// s_i = exp(e_i) exp(-f_i) exp(e_i) applied to a vector
inline std::vector<Rational> classical_reflection_apply(const ClassicalModule& m, int i,
                                                        std::vector<Rational> v) {
  v = exp_apply(m.e_matrix(i), +1, std::move(v));
  v = exp_apply(m.f_matrix(i), -1, std::move(v));
  v = exp_apply(m.e_matrix(i), +1, std::move(v));
  return v;
}

}  // namespace detail

/// Zero-weight block of the classical Coxeter element s_1 ... s_l on
/// V_1(lambda). Empty when lambda is outside the root lattice.
inline DenseMat<Rational> classical_coxeter_on_zero_space(const ClassicalModule& m) {
  const auto& zero = m.zero_space();
  DenseMat<Rational> block(static_cast<int>(zero.size()), static_cast<int>(zero.size()));
  for (size_t c = 0; c < zero.size(); ++c) {
    std::vector<Rational> v(static_cast<size_t>(m.dim));
    v[static_cast<size_t>(zero[c])] = 1;
    for (int i = m.datum.rank - 1; i >= 0; --i) v = detail::classical_reflection_apply(m, i, std::move(v));
    // the composite fixes weight zero, so the image must stay in the block
    for (int idx = 0; idx < m.dim; ++idx) {
      if (sgn(v[static_cast<size_t>(idx)]) == 0) continue;
      auto pos = std::find(zero.begin(), zero.end(), idx);
      if (pos == zero.end()) throw std::logic_error("classical coxeter: zero space not preserved");
      block.at(static_cast<int>(pos - zero.begin()), static_cast<int>(c)) = v[static_cast<size_t>(idx)];
    }
  }
  return block;
}

/// epsilon(lambda) = Tr(c, V_1(lambda)_0), always in {-1, 0, 1}.
inline int epsilon_classical(const RootDatum& rd, const Weight& lambda, const Int& size_limit = Int(600)) {
  if (!rd.in_root_lattice(lambda)) return 0;  // no zero-weight vector
  ClassicalModule m = build_classical_module(rd, lambda, size_limit);
  if (m.zero_space().empty()) return 0;
  DenseMat<Rational> block = classical_coxeter_on_zero_space(m);
  Rational tr(0);
  for (int t = 0; t < block.rows(); ++t) tr += block.at(t, t);
  if (!is_integer(tr)) throw std::logic_error("epsilon_classical: non-integer trace");
  long v = to_long(tr);
  if (v < -1 || v > 1) throw std::logic_error("epsilon_classical: trace outside {-1,0,1}");
  return static_cast<int>(v);
}

inline int epsilon_classical(const ClassicalModule& m) {
  if (m.zero_space().empty()) return 0;
  DenseMat<Rational> block = classical_coxeter_on_zero_space(m);
  Rational tr(0);
  for (int t = 0; t < block.rows(); ++t) tr += block.at(t, t);
  if (!is_integer(tr)) throw std::logic_error("epsilon_classical: non-integer trace");
  long v = to_long(tr);
  if (v < -1 || v > 1) throw std::logic_error("epsilon_classical: trace outside {-1,0,1}");
  return static_cast<int>(v);
}

}  // namespace etatrace
