#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wittn/arith.hpp"
#include "wittn/error.hpp"

namespace wittn {

/// Dense matrix of arbitrary-precision integers, row-major.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}
  IntMatrix(std::initializer_list<std::initializer_list<Integer>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    for (const auto& r : rows) {
      if (r.size() != cols_) throw DimensionMismatch("IntMatrix: ragged rows");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static IntMatrix diag(std::span<const Integer> d) {
    IntMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  Integer& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Integer& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  friend IntMatrix operator*(const IntMatrix& x, const IntMatrix& y) {
    if (x.cols_ != y.rows_) throw DimensionMismatch("IntMatrix: shape mismatch in product");
    IntMatrix r(x.rows_, y.cols_);
    for (std::size_t i = 0; i < x.rows_; ++i)
      for (std::size_t k = 0; k < x.cols_; ++k)
        for (std::size_t j = 0; j < y.cols_; ++j) r(i, j) += x(i, k) * y(k, j);
    return r;
  }

  std::vector<Integer> apply(std::span<const Integer> v) const {
    if (v.size() != cols_) throw DimensionMismatch("IntMatrix: vector length mismatch");
    std::vector<Integer> r(rows_, 0);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * v[j];
    return r;
  }

  /// Exact determinant by fraction-free (Bareiss) elimination.
  Integer determinant() const {
    if (rows_ != cols_) throw DimensionMismatch("IntMatrix: determinant of non-square matrix");
    const std::size_t n = rows_;
    if (n == 0) return 1;
    IntMatrix m = *this;
    Integer prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      if (m(k, k) == 0) {
        std::size_t piv = k + 1;
        while (piv < n && m(piv, k) == 0) ++piv;
        if (piv == n) return 0;
        for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(piv, j));
        sign = -sign;
      }
      for (std::size_t i = k + 1; i < n; ++i) {
        for (std::size_t j = k + 1; j < n; ++j) {
          Integer t = m(i, j) * m(k, k) - m(i, k) * m(k, j);
          mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
          m(i, j) = std::move(t);
        }
      }
      prev = m(k, k);
    }
    return sign * m(n - 1, n - 1);
  }

  std::vector<std::vector<Integer>> to_rows() const {
    std::vector<std::vector<Integer>> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i].assign(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
    return out;
  }

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

inline bool is_unimodular(const IntMatrix& m) {
  if (m.rows() != m.cols()) return false;
  const Integer d = m.determinant();
  return d == 1 || d == -1;
}

/// x*u + y*v = gcd(u, v) with x in (-v/(2g), v/(2g)]; requires u, v >= 1.
struct Bezout {
  Integer g, x, y;
};

inline Bezout minimal_bezout(const Integer& u, const Integer& v) {
  Bezout b;
  mpz_gcdext(b.g.get_mpz_t(), b.x.get_mpz_t(), b.y.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t());
  const Integer period = v / b.g;
  Integer x = b.x % period;
  if (x < 0) x += period;
  if (2 * x > period) x -= period;
  b.x = x;
  b.y = (b.g - u * x) / v;
  return b;
}

struct EuclidFactorization {
  Integer s1, s2, a;
  Integer g, e, d;
  IntMatrix A, B, Bp, C;
};

namespace detail {

inline void verify_euclid(const EuclidFactorization& r) {
  auto fail = [](const std::string& what) { throw InternalVerificationFailure("euclid_factorize: " + what); };
  const Integer eg = r.e * r.g;
  const std::vector<Integer> target_g{r.g, 0}, target_eg{eg, 0};
  if (r.A.apply(std::vector<Integer>{r.s1, r.s2}) != target_g) fail("A (s1, s2) != (g, 0)");
  if (r.B.apply(std::vector<Integer>{r.s1, r.e * r.s2}) != target_eg) fail("B (s1, e s2) != (eg, 0)");
  if (r.Bp.apply(std::vector<Integer>{r.s1, r.e * r.s2}) != target_eg) fail("B' (s1, e s2) != (eg, 0)");
  if (r.C.apply(std::vector<Integer>{r.s1, r.a * r.s2}) != target_eg) fail("C (s1, a s2) != (eg, 0)");
  const Integer e1[] = {r.e, 1}, one_e[] = {1, r.e}, one_d[] = {1, r.d};
  if (IntMatrix::diag(e1) * r.A != r.B * IntMatrix::diag(one_e)) fail("diag(e,1) A != B diag(1,e)");
  if (IntMatrix::diag(one_d) * r.Bp != r.C * IntMatrix::diag(one_d)) fail("diag(1,d) B' != C diag(1,d)");
  for (const auto* m : {&r.A, &r.B, &r.Bp, &r.C})
    if (!is_unimodular(*m)) fail("matrix is not in GL_2(Z)");
  if (r.d * r.e != r.a) fail("d e != a");
}

}  // namespace detail

/// Matrices A, B, B', C in GL_2(Z) with A(s1,s2) = (g,0), B(s1,e s2) = B'(s1,e s2) = (eg,0),
/// C(s1,a s2) = (eg,0), diag(e,1) A = B diag(1,e) and diag(1,d) B' = C diag(1,d).
inline EuclidFactorization euclid_factorize(const Integer& s1, const Integer& s2, const Integer& a) {
  if (s1 < 1 || s2 < 1 || a < 1) throw DomainError("euclid_factorize: s1, s2, a must be >= 1");
  EuclidFactorization r;
  r.s1 = s1;
  r.s2 = s2;
  r.a = a;
  const Bezout ab = minimal_bezout(s1, s2);
  const Bezout cb = minimal_bezout(s1, a * s2);
  r.g = ab.g;
  r.e = cb.g / r.g;
  r.d = a / r.e;
  const Integer eg = cb.g;
  r.A = IntMatrix{{ab.x, ab.y}, {s2 / r.g, -s1 / r.g}};
  r.B = IntMatrix{{r.e * ab.x, ab.y}, {s2 / r.g, -s1 / eg}};
  r.C = IntMatrix{{cb.x, cb.y}, {a * s2 / eg, -s1 / eg}};
  r.Bp = IntMatrix{{cb.x, r.d * cb.y}, {s2 / r.g, -s1 / eg}};
  detail::verify_euclid(r);
  return r;
}

struct TorusReduction {
  Integer g;
  IntMatrix M;
};

/// M in GL_m(Z) with M s = (gcd(s), 0, ..., 0), by repeated 2x2 Euclid steps against the first entry.
inline TorusReduction torus_reduce(std::span<const Integer> s) {
  const std::size_t m = s.size();
  if (m == 0) throw DomainError("torus_reduce: need at least one entry");
  for (const auto& v : s)
    if (v < 1) throw DomainError("torus_reduce: entries must be >= 1");
  IntMatrix M = IntMatrix::identity(m);
  std::vector<Integer> v(s.begin(), s.end());
  for (std::size_t k = 1; k < m; ++k) {
    const Bezout b = minimal_bezout(v[0], v[k]);
    const Integer p = v[k] / b.g, q = v[0] / b.g;
    for (std::size_t j = 0; j < m; ++j) {
      Integer top = b.x * M(0, j) + b.y * M(k, j);
      Integer bottom = p * M(0, j) - q * M(k, j);
      M(0, j) = std::move(top);
      M(k, j) = std::move(bottom);
    }
    v[0] = b.g;
    v[k] = 0;
  }
  std::vector<Integer> expect(m, 0);
  expect[0] = v[0];
  if (M.apply(s) != expect || !is_unimodular(M))
    throw InternalVerificationFailure("torus_reduce: M s != (g, 0, ..., 0) or det M != +-1");
  return {v[0], std::move(M)};
}

}  // namespace wittn
