#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "etatrace/ratfunc.hpp"

namespace etatrace {

template <class F>
struct FieldOps;

template <>
struct FieldOps<Rational> {
  static bool is_zero(const Rational& x) { return sgn(x) == 0; }
  static Rational inv(const Rational& x) { return Rational(1) / x; }
  /// Rescales to a primitive integer vector (shared denominator cleared,
  /// content divided out, first nonzero entry positive).
  static void normalize_row(std::vector<Rational>& row) {
    Int lcm = 1, gcd = 0;
    int first_sign = 0;
    for (const auto& x : row)
      if (sgn(x) != 0) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), x.get_den().get_mpz_t());
    for (const auto& x : row)
      if (sgn(x) != 0) {
        if (first_sign == 0) first_sign = sgn(x);
        Int num = Rational(x * lcm).get_num();
        mpz_gcd(gcd.get_mpz_t(), gcd.get_mpz_t(), num.get_mpz_t());
      }
    if (gcd == 0) return;
    Rational scale = Rational(lcm) / Rational(gcd);
    if (first_sign < 0) scale = -scale;
    for (auto& x : row)
      if (sgn(x) != 0) x *= scale;
  }
};

template <>
struct FieldOps<RatFunc> {
  static bool is_zero(const RatFunc& x) { return x.is_zero(); }
  static RatFunc inv(const RatFunc& x) { return x.inverse(); }
  /// Clears denominators and divides by the polynomial content, keeping the
  /// row made of small coprime Laurent polynomials.
  static void normalize_row(std::vector<RatFunc>& row) {
    LaurentPoly lcm(1);
    for (const auto& x : row)
      if (!x.is_zero() && !x.den().is_one()) {
        LaurentPoly g = laurent_gcd(lcm, x.den());
        lcm = g.is_one() ? lcm * x.den() : lcm * divexact(x.den(), g);
      }
    std::vector<LaurentPoly> nums(row.size());
    LaurentPoly content;
    for (size_t i = 0; i < row.size(); ++i) {
      if (row[i].is_zero()) continue;
      nums[i] = row[i].num() * divexact(lcm, row[i].den());
      content = content.is_zero() ? nums[i] : laurent_gcd(content, nums[i]);
      if (content.is_one()) content = LaurentPoly(1);
    }
    if (content.is_zero()) return;
    for (size_t i = 0; i < row.size(); ++i) {
      if (nums[i].is_zero()) { row[i] = RatFunc(); continue; }
      row[i] = RatFunc(content.is_one() ? nums[i] : divexact(nums[i], content));
    }
  }
};

/// Dense matrix over an exact field, row-major.
template <class F>
class DenseMat {
 public:
  DenseMat() = default;
  DenseMat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {}

  static DenseMat identity(int n) {
    DenseMat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = F(1);
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  F& at(int r, int c) { return a_[static_cast<size_t>(r) * cols_ + c]; }
  const F& at(int r, int c) const { return a_[static_cast<size_t>(r) * cols_ + c]; }

  friend bool operator==(const DenseMat& x, const DenseMat& y) {
    return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.a_ == y.a_;
  }

  DenseMat mul(const DenseMat& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("DenseMat::mul: dimension mismatch");
    DenseMat r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
      for (int k = 0; k < cols_; ++k) {
        const F& x = at(i, k);
        if (FieldOps<F>::is_zero(x)) continue;
        for (int j = 0; j < o.cols_; ++j) {
          const F& y = o.at(k, j);
          if (!FieldOps<F>::is_zero(y)) r.at(i, j) += x * y;
        }
      }
    return r;
  }

  std::vector<F> apply(const std::vector<F>& v) const {
    if (static_cast<int>(v.size()) != cols_) throw std::invalid_argument("DenseMat::apply: dimension mismatch");
    std::vector<F> r(static_cast<size_t>(rows_));
    for (int j = 0; j < cols_; ++j) {
      if (FieldOps<F>::is_zero(v[static_cast<size_t>(j)])) continue;
      for (int i = 0; i < rows_; ++i) {
        const F& x = at(i, j);
        if (!FieldOps<F>::is_zero(x)) r[static_cast<size_t>(i)] += x * v[static_cast<size_t>(j)];
      }
    }
    return r;
  }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<F> a_;
};

/// Indices of the lexicographically first maximal independent subset of the
/// rows, found by exact forward elimination.
template <class F>
std::vector<int> select_independent_rows(const DenseMat<F>& m) {
  std::vector<std::vector<F>> echelon;  // reduced rows
  std::vector<int> pivot_col;
  std::vector<int> picked;
  for (int r = 0; r < m.rows(); ++r) {
    std::vector<F> row(static_cast<size_t>(m.cols()));
    for (int c = 0; c < m.cols(); ++c) row[static_cast<size_t>(c)] = m.at(r, c);
    for (size_t k = 0; k < echelon.size(); ++k) {
      const F& lead = row[static_cast<size_t>(pivot_col[k])];
      if (FieldOps<F>::is_zero(lead)) continue;
      F f = lead;  // echelon rows are pivot-normalized
      for (int c = 0; c < m.cols(); ++c) {
        const F& e = echelon[k][static_cast<size_t>(c)];
        if (!FieldOps<F>::is_zero(e)) row[static_cast<size_t>(c)] -= f * e;
      }
    }
    int pc = -1;
    for (int c = 0; c < m.cols(); ++c)
      if (!FieldOps<F>::is_zero(row[static_cast<size_t>(c)])) { pc = c; break; }
    if (pc < 0) continue;
    F inv = FieldOps<F>::inv(row[static_cast<size_t>(pc)]);
    for (int c = 0; c < m.cols(); ++c)
      if (!FieldOps<F>::is_zero(row[static_cast<size_t>(c)])) row[static_cast<size_t>(c)] *= inv;
    echelon.push_back(std::move(row));
    pivot_col.push_back(pc);
    picked.push_back(r);
  }
  return picked;
}

/// Solves A X = B for square nonsingular A by Gauss-Jordan (first-nonzero
/// pivoting keeps the computation deterministic).
template <class F>
DenseMat<F> solve_linear(DenseMat<F> a, DenseMat<F> b) {
  if (a.rows() != a.cols() || a.rows() != b.rows())
    throw std::invalid_argument("solve_linear: dimension mismatch");
  int n = a.rows();
  std::vector<int> perm(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<size_t>(i)] = i;
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r)
      if (!FieldOps<F>::is_zero(a.at(r, col))) { piv = r; break; }
    if (piv < 0) throw std::domain_error("solve_linear: singular matrix");
    if (piv != col)
      for (int j = 0; j < n; ++j) { std::swap(a.at(piv, j), a.at(col, j)); }
    if (piv != col)
      for (int j = 0; j < b.cols(); ++j) std::swap(b.at(piv, j), b.at(col, j));
    F inv = FieldOps<F>::inv(a.at(col, col));
    for (int j = col; j < n; ++j)
      if (!FieldOps<F>::is_zero(a.at(col, j))) a.at(col, j) *= inv;
    for (int j = 0; j < b.cols(); ++j)
      if (!FieldOps<F>::is_zero(b.at(col, j))) b.at(col, j) *= inv;
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      F f = a.at(r, col);
      if (FieldOps<F>::is_zero(f)) continue;
      for (int j = col; j < n; ++j) {
        const F& e = a.at(col, j);
        if (!FieldOps<F>::is_zero(e)) a.at(r, j) -= f * e;
      }
      for (int j = 0; j < b.cols(); ++j) {
        const F& e = b.at(col, j);
        if (!FieldOps<F>::is_zero(e)) b.at(r, j) -= f * e;
      }
    }
  }
  return b;
}

template <class F>
DenseMat<F> invert(const DenseMat<F>& a) {
  return solve_linear(a, DenseMat<F>::identity(a.rows()));
}

/// Basis of the null space of A as columns, from the reduced row echelon
/// form with pivots at the lexicographically first columns.
template <class F>
DenseMat<F> kernel_basis(DenseMat<F> a) {
  int rows = a.rows(), cols = a.cols();
  std::vector<int> pivot_of_col(static_cast<size_t>(cols), -1);
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int piv = -1;
    for (int r = rank; r < rows; ++r)
      if (!FieldOps<F>::is_zero(a.at(r, col))) { piv = r; break; }
    if (piv < 0) continue;
    if (piv != rank)
      for (int j = 0; j < cols; ++j) std::swap(a.at(piv, j), a.at(rank, j));
    F inv = FieldOps<F>::inv(a.at(rank, col));
    for (int j = 0; j < cols; ++j)
      if (!FieldOps<F>::is_zero(a.at(rank, j))) a.at(rank, j) *= inv;
    for (int r = 0; r < rows; ++r) {
      if (r == rank) continue;
      F f = a.at(r, col);
      if (FieldOps<F>::is_zero(f)) continue;
      for (int j = 0; j < cols; ++j) {
        const F& e = a.at(rank, j);
        if (!FieldOps<F>::is_zero(e)) a.at(r, j) -= f * e;
      }
    }
    pivot_of_col[static_cast<size_t>(col)] = rank;
    ++rank;
  }
  std::vector<int> free_cols;
  for (int c = 0; c < cols; ++c)
    if (pivot_of_col[static_cast<size_t>(c)] < 0) free_cols.push_back(c);
  DenseMat<F> kernel(cols, static_cast<int>(free_cols.size()));
  for (size_t k = 0; k < free_cols.size(); ++k) {
    int fc = free_cols[k];
    kernel.at(fc, static_cast<int>(k)) = F(1);
    for (int c = 0; c < cols; ++c) {
      int pr = pivot_of_col[static_cast<size_t>(c)];
      if (pr >= 0) kernel.at(c, static_cast<int>(k)) = -a.at(pr, fc);
    }
  }
  return kernel;
}

/// Sparse matrix over an exact field; per-column lists sorted by row index
/// with no stored zeros, so equality is structural.
template <class F>
class SparseMat {
 public:
  SparseMat() = default;
  SparseMat(int rows, int cols) : rows_(rows), cols_(cols), cols_data_(static_cast<size_t>(cols)) {}

  static SparseMat identity(int n) {
    SparseMat m(n, n);
    for (int i = 0; i < n; ++i) m.cols_data_[static_cast<size_t>(i)].emplace_back(i, F(1));
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const std::vector<std::pair<int, F>>& column(int c) const { return cols_data_[static_cast<size_t>(c)]; }

  void set(int r, int c, F v) {
    auto& col = cols_data_[static_cast<size_t>(c)];
    auto it = std::lower_bound(col.begin(), col.end(), r,
                               [](const std::pair<int, F>& e, int row) { return e.first < row; });
    if (it != col.end() && it->first == r) {
      if (FieldOps<F>::is_zero(v)) col.erase(it);
      else it->second = std::move(v);
    } else if (!FieldOps<F>::is_zero(v)) {
      col.insert(it, {r, std::move(v)});
    }
  }

  F get(int r, int c) const {
    const auto& col = cols_data_[static_cast<size_t>(c)];
    auto it = std::lower_bound(col.begin(), col.end(), r,
                               [](const std::pair<int, F>& e, int row) { return e.first < row; });
    if (it != col.end() && it->first == r) return it->second;
    return F(0);
  }

  size_t nnz() const {
    size_t n = 0;
    for (const auto& col : cols_data_) n += col.size();
    return n;
  }

  bool is_zero() const {
    for (const auto& col : cols_data_)
      if (!col.empty()) return false;
    return true;
  }

  friend bool operator==(const SparseMat& a, const SparseMat& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.cols_data_ == b.cols_data_;
  }
  friend bool operator!=(const SparseMat& a, const SparseMat& b) { return !(a == b); }

  friend SparseMat operator+(const SparseMat& a, const SparseMat& b) { return combine(a, b, false); }
  friend SparseMat operator-(const SparseMat& a, const SparseMat& b) { return combine(a, b, true); }

  SparseMat scaled(const F& s) const {
    SparseMat r(rows_, cols_);
    if (FieldOps<F>::is_zero(s)) return r;
    for (int c = 0; c < cols_; ++c)
      for (const auto& [row, v] : cols_data_[static_cast<size_t>(c)])
        r.cols_data_[static_cast<size_t>(c)].emplace_back(row, v * s);
    return r;
  }

  friend SparseMat operator*(const SparseMat& a, const SparseMat& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("SparseMat::mul: dimension mismatch");
    SparseMat r(a.rows_, b.cols_);
    std::vector<F> scratch(static_cast<size_t>(a.rows_));
    std::vector<int> touched;
    for (int c = 0; c < b.cols_; ++c) {
      touched.clear();
      for (const auto& [k, bv] : b.cols_data_[static_cast<size_t>(c)]) {
        for (const auto& [row, av] : a.cols_data_[static_cast<size_t>(k)]) {
          if (FieldOps<F>::is_zero(scratch[static_cast<size_t>(row)])) touched.push_back(row);
          scratch[static_cast<size_t>(row)] += av * bv;
        }
      }
      std::sort(touched.begin(), touched.end());
      auto& out = r.cols_data_[static_cast<size_t>(c)];
      for (int row : touched) {
        F& v = scratch[static_cast<size_t>(row)];
        if (!FieldOps<F>::is_zero(v)) out.emplace_back(row, std::move(v));
        scratch[static_cast<size_t>(row)] = F(0);
      }
    }
    return r;
  }

  std::vector<F> apply(const std::vector<F>& v) const {
    if (static_cast<int>(v.size()) != cols_) throw std::invalid_argument("SparseMat::apply: dimension mismatch");
    std::vector<F> r(static_cast<size_t>(rows_));
    for (int c = 0; c < cols_; ++c) {
      const F& x = v[static_cast<size_t>(c)];
      if (FieldOps<F>::is_zero(x)) continue;
      for (const auto& [row, av] : cols_data_[static_cast<size_t>(c)]) r[static_cast<size_t>(row)] += av * x;
    }
    return r;
  }

  SparseMat pow(unsigned long n) const {
    if (rows_ != cols_) throw std::invalid_argument("SparseMat::pow: not square");
    SparseMat r = identity(rows_), base = *this;
    while (n) {
      if (n & 1) r = r * base;
      n >>= 1;
      if (n) base = base * base;
    }
    return r;
  }

  F trace() const {
    if (rows_ != cols_) throw std::invalid_argument("SparseMat::trace: not square");
    F t(0);
    for (int c = 0; c < cols_; ++c) t += get(c, c);
    return t;
  }

  DenseMat<F> block(const std::vector<int>& row_idx, const std::vector<int>& col_idx) const {
    DenseMat<F> m(static_cast<int>(row_idx.size()), static_cast<int>(col_idx.size()));
    for (size_t j = 0; j < col_idx.size(); ++j)
      for (size_t i = 0; i < row_idx.size(); ++i) m.at(static_cast<int>(i), static_cast<int>(j)) = get(row_idx[i], col_idx[j]);
    return m;
  }

  /// Entries in row-major coordinate order.
  std::vector<std::tuple<int, int, F>> coo_row_major() const {
    std::vector<std::tuple<int, int, F>> out;
    out.reserve(nnz());
    for (int c = 0; c < cols_; ++c)
      for (const auto& [row, v] : cols_data_[static_cast<size_t>(c)]) out.emplace_back(row, c, v);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
      return std::get<0>(a) != std::get<0>(b) ? std::get<0>(a) < std::get<0>(b) : std::get<1>(a) < std::get<1>(b);
    });
    return out;
  }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<std::vector<std::pair<int, F>>> cols_data_;

  static SparseMat combine(const SparseMat& a, const SparseMat& b, bool sub) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
      throw std::invalid_argument("SparseMat: dimension mismatch");
    SparseMat r(a.rows_, a.cols_);
    for (int c = 0; c < a.cols_; ++c) {
      const auto& ca = a.cols_data_[static_cast<size_t>(c)];
      const auto& cb = b.cols_data_[static_cast<size_t>(c)];
      auto& out = r.cols_data_[static_cast<size_t>(c)];
      size_t i = 0, j = 0;
      while (i < ca.size() || j < cb.size()) {
        if (j == cb.size() || (i < ca.size() && ca[i].first < cb[j].first)) {
          out.push_back(ca[i++]);
        } else if (i == ca.size() || cb[j].first < ca[i].first) {
          out.emplace_back(cb[j].first, sub ? -cb[j].second : cb[j].second);
          ++j;
        } else {
          F v = sub ? F(ca[i].second - cb[j].second) : F(ca[i].second + cb[j].second);
          if (!FieldOps<F>::is_zero(v)) out.emplace_back(ca[i].first, std::move(v));
          ++i, ++j;
        }
      }
    }
    return r;
  }
};

}  // namespace etatrace
