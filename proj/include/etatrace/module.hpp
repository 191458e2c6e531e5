#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "etatrace/linalg.hpp"
#include "etatrace/rootdata.hpp"

namespace etatrace {

/// Highest-weight module with explicit sparse generator matrices.
/// Basis index 0 is the highest-weight vector; indices are grouped by weight,
/// weights ordered by (height of lambda - mu, coordinates).
///
/// Quantum instance (F = RatFunc): E_i, F_i matrices plus K_i realized as the
/// diagonal q^{(alpha_i, mu)}. Classical instance (F = Rational): e_i, f_i
/// matrices plus h_i = diag <mu, alpha_i^vee>.
template <class F>
struct HWModule {
  RootDatum datum;
  Weight lambda;
  int dim = 0;
  std::vector<Weight> basis_weights;
  std::map<Weight, std::vector<int>> weight_spaces;
  std::vector<SparseMat<F>> raise_mats;  // E_i (quantum) / e_i (classical)
  std::vector<SparseMat<F>> lower_mats;  // F_i / f_i

  long coroot_pairing(int i, int idx) const {
    return basis_weights[static_cast<size_t>(idx)][static_cast<size_t>(i)];
  }

  std::vector<int> weight_space_indices(const Weight& mu) const {
    auto it = weight_spaces.find(mu);
    return it == weight_spaces.end() ? std::vector<int>{} : it->second;
  }

  const std::vector<int>& zero_space() const {
    static const std::vector<int> empty;
    auto it = weight_spaces.find(Weight(static_cast<size_t>(datum.rank), 0));
    return it == weight_spaces.end() ? empty : it->second;
  }
};

struct IrrModule : HWModule<RatFunc> {
  /// K_i^{±1}: diagonal with entry q^{±(alpha_i, mu)} = q^{±d_i <mu, a_i^vee>}.
  SparseMat<RatFunc> k_matrix(int i, int sign = 1) const {
    SparseMat<RatFunc> k(dim, dim);
    for (int idx = 0; idx < dim; ++idx) {
      long e = sign * datum.d[static_cast<size_t>(i)] * coroot_pairing(i, idx);
      k.set(idx, idx, RatFunc(LaurentPoly::monomial(e)));
    }
    return k;
  }
  const SparseMat<RatFunc>& e_matrix(int i) const { return raise_mats[static_cast<size_t>(i)]; }
  const SparseMat<RatFunc>& f_matrix(int i) const { return lower_mats[static_cast<size_t>(i)]; }
};

struct ClassicalModule : HWModule<Rational> {
  SparseMat<Rational> h_matrix(int i) const {
    SparseMat<Rational> h(dim, dim);
    for (int idx = 0; idx < dim; ++idx) {
      long v = coroot_pairing(i, idx);
      if (v != 0) h.set(idx, idx, make_rational(v));
    }
    return h;
  }
  const SparseMat<Rational>& e_matrix(int i) const { return raise_mats[static_cast<size_t>(i)]; }
  const SparseMat<Rational>& f_matrix(int i) const { return lower_mats[static_cast<size_t>(i)]; }
};

namespace detail {

// The two specializations of the Chevalley commutation scalar: [E_i, F_i]
// acts on a weight-m eigenvector as bracket(i, m). The same values are the
// divided-power normalizers.
struct QuantumScalars {
  using F = RatFunc;
  const RootDatum* rd;
  F bracket(int i, long m) const { return RatFunc(qnum(m, rd->d[static_cast<size_t>(i)])); }
};
struct ClassicalScalars {
  using F = Rational;
  const RootDatum* rd;
  F bracket(int, long m) const { return make_rational(m); }
};

template <class Scalars>
class ModuleBuilder {
  using F = typename Scalars::F;

 public:
  ModuleBuilder(const RootDatum& rd, const Weight& lambda, const Int& size_limit)
      : rd_(rd), lambda_(lambda), scalars_{&rd} {
    if (!rd_.is_dominant(lambda)) throw std::invalid_argument("build_module: weight not dominant");
    Int wd = rd_.weyl_dim(lambda);
    if (wd > size_limit)
      throw SizeLimitError("module " + rd_.type.str() + " [" + weight_str(lambda) + "] has dimension " +
                           wd.get_str() + " above the size limit " + size_limit.get_str());
    mults_ = rd_.freudenthal_multiplicities(lambda);
    for (int i = 0; i < rd_.rank; ++i) {
      RootVec e(static_cast<size_t>(rd_.rank), 0);
      e[static_cast<size_t>(i)] = 1;
      alpha_w_.push_back(rd_.root_to_weight(e));
    }
  }

  HWModule<F> run() {
    // group weights by height of lambda - mu
    std::map<long, std::vector<Weight>> by_height;
    for (const auto& [mu, m] : mults_) by_height[height_of(mu)].push_back(mu);
    for (auto& [h, ws] : by_height) std::sort(ws.begin(), ws.end());

    for (const auto& [h, ws] : by_height)
      for (const auto& mu : ws) process_weight(mu, h);

    return assemble(by_height);
  }

 private:
  struct Layer {
    int mult = 0;
    DenseMat<F> pairing;                 // row-rescaled contravariant form of the basis
    std::vector<DenseMat<F>> e_block;    // per i: basis(mu) -> coords at mu + a_i
    std::vector<DenseMat<F>> f_block;    // per i: basis(mu) -> coords at mu - a_i
  };

  const RootDatum& rd_;
  Weight lambda_;
  Scalars scalars_;
  std::map<Weight, long> mults_;
  std::vector<Weight> alpha_w_;
  std::map<Weight, Layer> layers_;

  long height_of(const Weight& mu) const {
    Weight diff(static_cast<size_t>(rd_.rank));
    for (int j = 0; j < rd_.rank; ++j) diff[j] = lambda_[j] - mu[j];
    auto coords = rd_.weight_to_root_coords(diff);
    long h = 0;
    for (const auto& c : coords) h += to_long(c);
    return h;
  }

  long root_coord_of_depth(const Weight& mu, int i) const {
    Weight diff(static_cast<size_t>(rd_.rank));
    for (int j = 0; j < rd_.rank; ++j) diff[j] = lambda_[j] - mu[j];
    return to_long(rd_.weight_to_root_coords(diff)[static_cast<size_t>(i)]);
  }

  Weight shift(const Weight& mu, int i, int dir) const {
    Weight r = mu;
    for (int j = 0; j < rd_.rank; ++j) r[j] += dir * alpha_w_[static_cast<size_t>(i)][j];
    return r;
  }

  int mult_of(const Weight& mu) const {
    auto it = mults_.find(mu);
    return it == mults_.end() ? 0 : static_cast<int>(it->second);
  }

  void process_weight(const Weight& mu, long height) {
    Layer& layer = layers_[mu];
    layer.mult = mult_of(mu);
    layer.e_block.assign(static_cast<size_t>(rd_.rank), {});
    layer.f_block.assign(static_cast<size_t>(rd_.rank), {});
    if (height == 0) {
      layer.pairing = DenseMat<F>(1, 1);
      layer.pairing.at(0, 0) = F(1);
      return;
    }

    // candidates F_i . (basis vector of mu + a_i), in word-lexicographic order
    std::vector<std::pair<int, int>> cand;
    for (int i = 0; i < rd_.rank; ++i) {
      int pm = mult_of(shift(mu, i, +1));
      for (int t = 0; t < pm; ++t) cand.emplace_back(i, t);
    }
    int m = static_cast<int>(cand.size());
    if (m == 0) throw std::logic_error("build_module: weight with no candidates");

    // E_k images of every candidate, in parent-layer coordinates
    std::vector<std::vector<std::vector<F>>> ecand(static_cast<size_t>(m));
    for (int b = 0; b < m; ++b) {
      auto [ib, tb] = cand[static_cast<size_t>(b)];
      Weight nu = shift(mu, ib, +1);
      const Layer& parent = layers_.at(nu);
      ecand[static_cast<size_t>(b)].resize(static_cast<size_t>(rd_.rank));
      for (int k = 0; k < rd_.rank; ++k) {
        Weight target = shift(mu, k, +1);  // weight of E_k(candidate)
        int tm = mult_of(target);
        std::vector<F> vec(static_cast<size_t>(tm));
        Weight up = shift(nu, k, +1);  // weight of E_k y
        if (mult_of(up) > 0 && parent.e_block[static_cast<size_t>(k)].rows() > 0) {
          // F_{ib}(E_k y): e_block column, then the f_block of the upper weight
          const DenseMat<F>& eb = parent.e_block[static_cast<size_t>(k)];
          std::vector<F> ey(static_cast<size_t>(eb.rows()));
          for (int r = 0; r < eb.rows(); ++r) ey[static_cast<size_t>(r)] = eb.at(r, tb);
          const Layer& upper = layers_.at(up);
          const DenseMat<F>& fb = upper.f_block[static_cast<size_t>(ib)];
          if (fb.rows() > 0) {
            std::vector<F> moved = fb.apply(ey);
            for (int r = 0; r < tm; ++r) vec[static_cast<size_t>(r)] = std::move(moved[static_cast<size_t>(r)]);
          }
        }
        if (k == ib) {
          long eigen = nu[static_cast<size_t>(k)];  // <nu, a_k^vee>
          vec[static_cast<size_t>(tb)] += scalars_.bracket(k, eigen);
        }
        ecand[static_cast<size_t>(b)][static_cast<size_t>(k)] = std::move(vec);
      }
    }

    // contravariant Gram matrix of the candidates (rows rescaled by the
    // parent pairing normalization, which preserves rank and solutions)
    DenseMat<F> gram(m, m);
    for (int a = 0; a < m; ++a) {
      auto [ia, ta] = cand[static_cast<size_t>(a)];
      const Layer& parent = layers_.at(shift(mu, ia, +1));
      for (int b = 0; b < m; ++b) {
        const auto& vec = ecand[static_cast<size_t>(b)][static_cast<size_t>(ia)];
        F acc(0);
        for (int k = 0; k < static_cast<int>(vec.size()); ++k) {
          const F& x = vec[static_cast<size_t>(k)];
          if (!FieldOps<F>::is_zero(x)) acc += parent.pairing.at(ta, k) * x;
        }
        gram.at(a, b) = std::move(acc);
      }
    }

    std::vector<int> picked = select_independent_rows(gram);
    if (static_cast<int>(picked.size()) != layer.mult)
      throw std::logic_error("build_module: Gram rank " + std::to_string(picked.size()) +
                             " differs from Freudenthal multiplicity " + std::to_string(layer.mult) +
                             " at a weight of " + rd_.type.str() + " [" + weight_str(lambda_) + "]");
    int n = layer.mult;

    // divided-power normalization per generator direction keeps entries small
    std::vector<F> scale(static_cast<size_t>(rd_.rank));
    for (int i = 0; i < rd_.rank; ++i) scale[static_cast<size_t>(i)] = scalars_.bracket(i, root_coord_of_depth(mu, i));

    // coordinates of every candidate in the selected (scaled) basis
    DenseMat<F> gb(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) gb.at(a, b) = gram.at(picked[static_cast<size_t>(a)], picked[static_cast<size_t>(b)]);
    std::vector<int> rejected;
    for (int b = 0; b < m; ++b)
      if (std::find(picked.begin(), picked.end(), b) == picked.end()) rejected.push_back(b);
    DenseMat<F> rhs(n, static_cast<int>(rejected.size()));
    for (size_t j = 0; j < rejected.size(); ++j)
      for (int a = 0; a < n; ++a) rhs.at(a, static_cast<int>(j)) = gram.at(picked[static_cast<size_t>(a)], rejected[j]);
    DenseMat<F> sol = rejected.empty() ? DenseMat<F>(n, 0) : solve_linear(gb, rhs);

    DenseMat<F> coords(n, m);  // candidate columns in scaled-basis coordinates
    for (int k = 0; k < n; ++k) {
      int b = picked[static_cast<size_t>(k)];
      coords.at(k, b) = scale[static_cast<size_t>(cand[static_cast<size_t>(b)].first)];
    }
    for (size_t j = 0; j < rejected.size(); ++j)
      for (int k = 0; k < n; ++k) {
        int pk = picked[static_cast<size_t>(k)];
        F v = sol.at(k, static_cast<int>(j)) * scale[static_cast<size_t>(cand[static_cast<size_t>(pk)].first)];
        coords.at(k, static_cast<int>(rejected[j])) = std::move(v);
      }

    // f_blocks of the parent layers are exactly the candidate coordinates
    for (int i = 0; i < rd_.rank; ++i) {
      Weight nu = shift(mu, i, +1);
      int pm = mult_of(nu);
      if (pm == 0) continue;
      DenseMat<F> fb(n, pm);
      int base = 0;
      for (int b = 0; b < m; ++b) {
        if (cand[static_cast<size_t>(b)].first != i) continue;
        int t = cand[static_cast<size_t>(b)].second;
        for (int k = 0; k < n; ++k) fb.at(k, t) = coords.at(k, b);
        ++base;
      }
      layers_.at(nu).f_block[static_cast<size_t>(i)] = std::move(fb);
    }

    // e_blocks of this layer: E_j(basis k) = E_j(candidate)/scale
    for (int j = 0; j < rd_.rank; ++j) {
      int tm = mult_of(shift(mu, j, +1));
      if (tm == 0) continue;
      DenseMat<F> eb(tm, n);
      for (int k = 0; k < n; ++k) {
        int b = picked[static_cast<size_t>(k)];
        const F inv_s = FieldOps<F>::inv(scale[static_cast<size_t>(cand[static_cast<size_t>(b)].first)]);
        const auto& vec = ecand[static_cast<size_t>(b)][static_cast<size_t>(j)];
        for (int r = 0; r < tm; ++r)
          if (!FieldOps<F>::is_zero(vec[static_cast<size_t>(r)])) eb.at(r, k) = vec[static_cast<size_t>(r)] * inv_s;
      }
      layer.e_block[static_cast<size_t>(j)] = std::move(eb);
    }

    // pairing of the new basis, column-corrected for the scaling then
    // row-normalized
    layer.pairing = DenseMat<F>(n, n);
    for (int a = 0; a < n; ++a) {
      std::vector<F> row(static_cast<size_t>(n));
      for (int k = 0; k < n; ++k) {
        int pb = picked[static_cast<size_t>(k)];
        row[static_cast<size_t>(k)] =
            gram.at(picked[static_cast<size_t>(a)], pb) * FieldOps<F>::inv(scale[static_cast<size_t>(cand[static_cast<size_t>(pb)].first)]);
      }
      FieldOps<F>::normalize_row(row);
      for (int k = 0; k < n; ++k) layer.pairing.at(a, k) = std::move(row[static_cast<size_t>(k)]);
    }
  }

  HWModule<F> assemble(const std::map<long, std::vector<Weight>>& by_height) {
    HWModule<F> mod;
    mod.datum = rd_;
    mod.lambda = lambda_;
    std::map<Weight, int> base;
    int dim = 0;
    for (const auto& [h, ws] : by_height)
      for (const auto& mu : ws) {
        int n = mult_of(mu);
        base[mu] = dim;
        auto& idx = mod.weight_spaces[mu];
        for (int t = 0; t < n; ++t) {
          mod.basis_weights.push_back(mu);
          idx.push_back(dim + t);
        }
        dim += n;
      }
    mod.dim = dim;
    if (Int(dim) != rd_.weyl_dim(lambda_)) throw std::logic_error("build_module: dimension mismatch");

    mod.raise_mats.assign(static_cast<size_t>(rd_.rank), SparseMat<F>(dim, dim));
    mod.lower_mats.assign(static_cast<size_t>(rd_.rank), SparseMat<F>(dim, dim));
    for (const auto& [mu, layer] : layers_) {
      int cb = base.at(mu);
      for (int i = 0; i < rd_.rank; ++i) {
        const DenseMat<F>& eb = layer.e_block[static_cast<size_t>(i)];
        if (eb.rows() > 0) {
          int rb = base.at(shift(mu, i, +1));
          for (int c = 0; c < eb.cols(); ++c)
            for (int r = 0; r < eb.rows(); ++r)
              if (!FieldOps<F>::is_zero(eb.at(r, c))) mod.raise_mats[static_cast<size_t>(i)].set(rb + r, cb + c, eb.at(r, c));
        }
        const DenseMat<F>& fb = layer.f_block[static_cast<size_t>(i)];
        if (fb.rows() > 0) {
          int rb = base.at(shift(mu, i, -1));
          for (int c = 0; c < fb.cols(); ++c)
            for (int r = 0; r < fb.rows(); ++r)
              if (!FieldOps<F>::is_zero(fb.at(r, c))) mod.lower_mats[static_cast<size_t>(i)].set(rb + r, cb + c, fb.at(r, c));
        }
      }
    }
    return mod;
  }
};

}  // namespace detail

/// Irreducible type-1 module V(lambda) over Q(q), built as the Verma quotient
/// through the contravariant form: spanning F-monomials are generated by
/// breadth-first descent, a basis is selected per weight space by exact
/// Gram-matrix rank, and generator actions are solved exactly.
inline IrrModule build_module(const RootDatum& rd, const Weight& lambda, const Int& size_limit = Int(600)) {
  detail::ModuleBuilder<detail::QuantumScalars> builder(rd, lambda, size_limit);
  IrrModule m;
  static_cast<HWModule<RatFunc>&>(m) = builder.run();
  return m;
}

/// Classical counterpart V_1(lambda), built independently over the rationals
/// (not by specializing quantum matrix entries).
inline ClassicalModule build_classical_module(const RootDatum& rd, const Weight& lambda,
                                              const Int& size_limit = Int(600)) {
  detail::ModuleBuilder<detail::ClassicalScalars> builder(rd, lambda, size_limit);
  ClassicalModule m;
  static_cast<HWModule<Rational>&>(m) = builder.run();
  return m;
}

/// Relation check report; every defining relation is listed with a verdict.
struct RelationReport {
  std::vector<std::pair<std::string, bool>> checks;
  bool all_pass() const {
    for (const auto& [name, ok] : checks)
      if (!ok) return false;
    return true;
  }
  void add(const std::string& name, bool ok) { checks.emplace_back(name, ok); }
  std::string first_failure() const {
    for (const auto& [name, ok] : checks)
      if (!ok) return name;
    return "";
  }
};

/// Exact matrix verification of all defining relations of U_q(g) on the
/// module: K-conjugations, [E_i, F_j], and both quantum Serre families.
inline RelationReport verify_module_relations(const IrrModule& m) {
  RelationReport rep;
  const RootDatum& rd = m.datum;
  int l = rd.rank;
  for (int i = 0; i < l; ++i) {
    SparseMat<RatFunc> k_i = m.k_matrix(i), k_i_inv = m.k_matrix(i, -1);
    rep.add("K" + std::to_string(i + 1) + " K" + std::to_string(i + 1) + "^-1 = 1",
            k_i * k_i_inv == SparseMat<RatFunc>::identity(m.dim));
    for (int j = 0; j < l; ++j) {
      SparseMat<RatFunc> k_j = m.k_matrix(j);
      if (j > i)
        rep.add("K" + std::to_string(i + 1) + " K" + std::to_string(j + 1) + " commute",
                k_i * k_j == k_j * k_i);
      // K_i E_j K_i^-1 = q_i^{c_ij} E_j and K_i F_j K_i^-1 = q_i^{-c_ij} F_j
      long cij = rd.cartan[static_cast<size_t>(i)][static_cast<size_t>(j)];
      RatFunc qexp(LaurentPoly::monomial(rd.d[static_cast<size_t>(i)] * cij));
      rep.add("K" + std::to_string(i + 1) + " E" + std::to_string(j + 1) + " conjugation",
              k_i * m.e_matrix(j) * k_i_inv == m.e_matrix(j).scaled(qexp));
      rep.add("K" + std::to_string(i + 1) + " F" + std::to_string(j + 1) + " conjugation",
              k_i * m.f_matrix(j) * k_i_inv == m.f_matrix(j).scaled(qexp.inverse()));
      // [E_i, F_j] = delta_ij (K_i - K_i^-1)/(q_i - q_i^-1)
      SparseMat<RatFunc> comm = m.e_matrix(i) * m.f_matrix(j) - m.f_matrix(j) * m.e_matrix(i);
      SparseMat<RatFunc> expect(m.dim, m.dim);
      if (i == j)
        for (int idx = 0; idx < m.dim; ++idx) {
          RatFunc v(qnum(m.coroot_pairing(i, idx), rd.d[static_cast<size_t>(i)]));
          if (!v.is_zero()) expect.set(idx, idx, v);
        }
      rep.add("[E" + std::to_string(i + 1) + ", F" + std::to_string(j + 1) + "]", comm == expect);
      if (i == j) continue;
      // quantum Serre relations
      long n_serre = 1 - cij;
      SparseMat<RatFunc> se(m.dim, m.dim), sf(m.dim, m.dim);
      for (long r = 0; r <= n_serre; ++r) {
        RatFunc coef(qbinomial(n_serre, r, rd.d[static_cast<size_t>(i)]));
        if (r % 2 == 1) coef = -coef;
        se = se + (m.e_matrix(i).pow(static_cast<unsigned long>(n_serre - r)) * m.e_matrix(j) *
                   m.e_matrix(i).pow(static_cast<unsigned long>(r)))
                      .scaled(coef);
        sf = sf + (m.f_matrix(i).pow(static_cast<unsigned long>(n_serre - r)) * m.f_matrix(j) *
                   m.f_matrix(i).pow(static_cast<unsigned long>(r)))
                      .scaled(coef);
      }
      rep.add("Serre E" + std::to_string(i + 1) + "," + std::to_string(j + 1), se.is_zero());
      rep.add("Serre F" + std::to_string(i + 1) + "," + std::to_string(j + 1), sf.is_zero());
    }
  }
  // highest-weight vector: killed by every E_i, correct K eigenvalue
  bool hw_ok = true;
  for (int i = 0; i < l; ++i)
    if (!m.e_matrix(i).column(0).empty()) hw_ok = false;
  rep.add("E_i v_lambda = 0", hw_ok);
  return rep;
}

/// Chevalley relations for the classical module.
inline RelationReport verify_classical_relations(const ClassicalModule& m) {
  RelationReport rep;
  const RootDatum& rd = m.datum;
  int l = rd.rank;
  auto bracket = [](const SparseMat<Rational>& a, const SparseMat<Rational>& b) { return a * b - b * a; };
  for (int i = 0; i < l; ++i) {
    SparseMat<Rational> h_i = m.h_matrix(i);
    for (int j = 0; j < l; ++j) {
      long cij = rd.cartan[static_cast<size_t>(i)][static_cast<size_t>(j)];
      rep.add("[h,e]", bracket(h_i, m.e_matrix(j)) == m.e_matrix(j).scaled(make_rational(cij)));
      rep.add("[h,f]", bracket(h_i, m.f_matrix(j)) == m.f_matrix(j).scaled(make_rational(-cij)));
      SparseMat<Rational> expect(m.dim, m.dim);
      if (i == j) expect = h_i;
      rep.add("[e,f]", bracket(m.e_matrix(i), m.f_matrix(j)) == expect);
      if (i == j) continue;
      SparseMat<Rational> ad = m.e_matrix(j);
      for (long r = 0; r < 1 - cij; ++r) ad = bracket(m.e_matrix(i), ad);
      rep.add("ad-Serre e", ad.is_zero());
    }
  }
  return rep;
}

}  // namespace etatrace
