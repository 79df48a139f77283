#pragma once

// Exact square-matrix algebra over the integers and rationals: determinants,
// Smith normal form with unimodular factors, and exact inverses.

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "trinom/errors.hpp"
#include "trinom/rational.hpp"

namespace trinom {

/// Dense n x n matrix stored row-major. Exponent vectors live in COLUMNS:
/// `from_columns({{4,0},{0,4}})` builds the matrix whose j-th column is the
/// j-th inner list.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n) : n_(n), a_(n * n, T(0)) {
    if (n == 0) throw validation_error("intlinalg", "matrix dimension must be at least 1");
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  static Matrix from_rows(const std::vector<std::vector<T>>& rows) {
    Matrix m(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != rows.size()) throw validation_error("intlinalg", "matrix must be square");
      for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  static Matrix from_columns(const std::vector<std::vector<T>>& cols) {
    return from_rows(cols).transposed();
  }

  template <class U>
  static Matrix from_rows(std::initializer_list<std::initializer_list<U>> rows) {
    std::vector<std::vector<T>> v;
    for (auto& r : rows) {
      std::vector<T> row;
      for (auto& e : r) row.push_back(T(e));
      v.push_back(std::move(row));
    }
    return from_rows(v);
  }

  template <class U>
  static Matrix from_columns(std::initializer_list<std::initializer_list<U>> cols) {
    return from_rows(cols).transposed();
  }

  static Matrix diagonal(const std::vector<T>& d) {
    Matrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t size() const noexcept { return n_; }

  T& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

  std::vector<T> row(std::size_t i) const {
    return std::vector<T>(a_.begin() + static_cast<std::ptrdiff_t>(i * n_),
                          a_.begin() + static_cast<std::ptrdiff_t>((i + 1) * n_));
  }
  std::vector<T> column(std::size_t j) const {
    std::vector<T> c(n_);
    for (std::size_t i = 0; i < n_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  Matrix transposed() const {
    Matrix t(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.n_ != b.n_) throw validation_error("intlinalg", "dimension mismatch in product");
    Matrix c(a.n_);
    for (std::size_t i = 0; i < a.n_; ++i)
      for (std::size_t k = 0; k < a.n_; ++k) {
        if (a(i, k) == 0) continue;
        for (std::size_t j = 0; j < a.n_; ++j) c(i, j) += a(i, k) * b(k, j);
      }
    return c;
  }

  friend std::vector<T> operator*(const Matrix& a, const std::vector<T>& v) {
    if (a.n_ != v.size()) throw validation_error("intlinalg", "dimension mismatch in product");
    std::vector<T> out(a.n_, T(0));
    for (std::size_t i = 0; i < a.n_; ++i)
      for (std::size_t j = 0; j < a.n_; ++j) out[i] += a(i, j) * v[j];
    return out;
  }

  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    Matrix c = a;
    for (std::size_t i = 0; i < c.a_.size(); ++i) c.a_[i] -= b.a_[i];
    return c;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) { return a.n_ == b.n_ && a.a_ == b.a_; }

  bool is_diagonal() const {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        if (i != j && (*this)(i, j) != 0) return false;
    return true;
  }

  void swap_rows(std::size_t i, std::size_t j) {
    for (std::size_t c = 0; c < n_; ++c) std::swap((*this)(i, c), (*this)(j, c));
  }
  void swap_cols(std::size_t i, std::size_t j) {
    for (std::size_t r = 0; r < n_; ++r) std::swap((*this)(r, i), (*this)(r, j));
  }
  // row_i += f * row_j
  void add_row(std::size_t i, std::size_t j, const T& f) {
    for (std::size_t c = 0; c < n_; ++c) (*this)(i, c) += f * (*this)(j, c);
  }
  // col_i += f * col_j
  void add_col(std::size_t i, std::size_t j, const T& f) {
    for (std::size_t r = 0; r < n_; ++r) (*this)(r, i) += f * (*this)(r, j);
  }

 private:
  std::size_t n_ = 0;
  std::vector<T> a_;
};

using IntegerMatrix = Matrix<Integer>;
using RationalMatrix = Matrix<Rational>;

inline RationalMatrix to_rational(const IntegerMatrix& m) {
  RationalMatrix r(m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) r(i, j) = Rational(m(i, j));
  return r;
}

inline RationalVector to_rational(const std::vector<Integer>& v) {
  return RationalVector(v.begin(), v.end());
}

template <class T>
std::ostream& operator<<(std::ostream& os, const Matrix<T>& m) {
  os << '[';
  for (std::size_t i = 0; i < m.size(); ++i) {
    os << (i ? ",[" : "[");
    for (std::size_t j = 0; j < m.size(); ++j) {
      if constexpr (std::is_same_v<T, Rational>)
        os << (j ? "," : "") << to_string(m(i, j));
      else
        os << (j ? "," : "") << m(i, j);
    }
    os << ']';
  }
  return os << ']';
}

/// Fraction-free (Bareiss) determinant; exact for integer input.
inline Integer determinant(const IntegerMatrix& m) {
  const std::size_t n = m.size();
  IntegerMatrix a = m;
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return 0;
      a.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

/// Gaussian elimination over Q.
inline Rational determinant(const RationalMatrix& m) {
  const std::size_t n = m.size();
  RationalMatrix a = m;
  Rational det = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a(p, k) == 0) ++p;
    if (p == n) return 0;
    if (p != k) {
      a.swap_rows(k, p);
      det = -det;
    }
    det *= a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a(i, k) == 0) continue;
      Rational f = a(i, k) / a(k, k);
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return det;
}

/// C * M * F = S with C, F unimodular and S = diag(q_1..q_n), q_j | q_{j+1}.
struct SnfDecomposition {
  IntegerMatrix C;
  IntegerMatrix S;
  IntegerMatrix F;

  std::vector<Integer> invariants() const {
    std::vector<Integer> q(S.size());
    for (std::size_t i = 0; i < S.size(); ++i) q[i] = S(i, i);
    return q;
  }
};

namespace detail {

inline Integer abs(const Integer& v) { return v < 0 ? Integer(-v) : v; }

// Truncating quotient; remainders keep the dividend's sign, which is enough
// for the Euclidean descent on |entries| below.
inline Integer quotient(const Integer& a, const Integer& b) { return a / b; }

}  // namespace detail

/// Smith normal form by row/column reduction. The pivot is the nonzero entry
/// of least absolute value in the active block, ties going to the lowest
/// (row, column), so the factors are reproducible.
inline SnfDecomposition smith_normal_form(const IntegerMatrix& m) {
  const std::size_t n = m.size();
  if (determinant(m) == 0) throw SingularMatrix("smith_normal_form requires det M != 0");

  IntegerMatrix a = m;
  IntegerMatrix C = IntegerMatrix::identity(n);
  IntegerMatrix F = IntegerMatrix::identity(n);

  for (std::size_t t = 0; t < n; ++t) {
    while (true) {
      std::size_t pr = n, pc = n;
      Integer best = 0;
      for (std::size_t i = t; i < n; ++i)
        for (std::size_t j = t; j < n; ++j) {
          if (a(i, j) == 0) continue;
          Integer v = detail::abs(a(i, j));
          if (pr == n || v < best) {
            best = v;
            pr = i;
            pc = j;
          }
        }
      // Nonsingular input always leaves a nonzero entry in the active block.
      if (pr != t) {
        a.swap_rows(t, pr);
        C.swap_rows(t, pr);
      }
      if (pc != t) {
        a.swap_cols(t, pc);
        F.swap_cols(t, pc);
      }

      bool dirty = false;
      for (std::size_t i = t + 1; i < n; ++i) {
        if (a(i, t) == 0) continue;
        Integer q = detail::quotient(a(i, t), a(t, t));
        a.add_row(i, t, Integer(-q));
        C.add_row(i, t, Integer(-q));
        if (a(i, t) != 0) dirty = true;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (a(t, j) == 0) continue;
        Integer q = detail::quotient(a(t, j), a(t, t));
        a.add_col(j, t, Integer(-q));
        F.add_col(j, t, Integer(-q));
        if (a(t, j) != 0) dirty = true;
      }
      if (dirty) continue;

      // Row and column are clear; enforce divisibility of the remaining block.
      std::size_t bad = n;
      for (std::size_t i = t + 1; i < n && bad == n; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (a(i, j) % a(t, t) != 0) {
            bad = i;
            break;
          }
      if (bad == n) break;
      a.add_row(t, bad, Integer(1));
      C.add_row(t, bad, Integer(1));
    }
    if (a(t, t) < 0) {
      for (std::size_t j = 0; j < n; ++j) {
        a(t, j) = -a(t, j);
        C(t, j) = -C(t, j);
      }
    }
  }
  return {std::move(C), std::move(a), std::move(F)};
}

/// Classical adjugate / determinant inverse. Independent of the SNF route.
inline RationalMatrix adjugate_inverse(const IntegerMatrix& m) {
  const std::size_t n = m.size();
  Integer det = determinant(m);
  if (det == 0) throw SingularMatrix("inverse of a singular matrix");
  RationalMatrix inv(n);
  if (n == 1) {
    inv(0, 0) = make_rational(1, det);
    return inv;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      IntegerMatrix minor(n - 1);
      for (std::size_t r = 0, rr = 0; r < n; ++r) {
        if (r == j) continue;
        for (std::size_t c = 0, cc = 0; c < n; ++c) {
          if (c == i) continue;
          minor(rr, cc++) = m(r, c);
        }
        ++rr;
      }
      Integer cof = determinant(minor);
      if ((i + j) % 2) cof = -cof;
      inv(i, j) = make_rational(cof, det);
    }
  return inv;
}

/// M^{-1} assembled as F * S^{-1} * C from the Smith factors and checked
/// entrywise against the adjugate route.
inline RationalMatrix rational_inverse(const IntegerMatrix& m, const SnfDecomposition& snf) {
  const std::size_t n = m.size();
  RationalMatrix sinv(n);
  for (std::size_t i = 0; i < n; ++i) sinv(i, i) = make_rational(1, snf.S(i, i));
  RationalMatrix inv = to_rational(snf.F) * sinv * to_rational(snf.C);
  if (!(inv == adjugate_inverse(m)))
    throw numerical_error("intlinalg", "SNF and adjugate inverses disagree");
  return inv;
}

inline RationalMatrix rational_inverse(const IntegerMatrix& m) {
  return rational_inverse(m, smith_normal_form(m));
}

/// Solves A z = b exactly; A must be nonsingular.
inline RationalVector solve(const RationalMatrix& A, const RationalVector& b) {
  const std::size_t n = A.size();
  RationalMatrix a = A;
  RationalVector x = b;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a(p, k) == 0) ++p;
    if (p == n) throw SingularMatrix("linear solve with singular matrix");
    if (p != k) {
      a.swap_rows(k, p);
      std::swap(x[k], x[p]);
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || a(i, k) == 0) continue;
      Rational f = a(i, k) / a(k, k);
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
      x[i] -= f * x[k];
    }
  }
  for (std::size_t i = 0; i < n; ++i) x[i] /= a(i, i);
  return x;
}

}  // namespace trinom
