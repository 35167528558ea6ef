#pragma once

// Exact integer and rational matrix kernels. Everything here works over
// GMP integers/rationals; there is no fixed-width arithmetic on entries.

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "quadtmf/error.hpp"

namespace quadtmf {

using BigInt = mpz_class;
using Rational = mpq_class;

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(std::initializer_list<std::initializer_list<T>> init);

  static Matrix identity(std::size_t n);
  static Matrix zero(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }
  bool is_square() const noexcept { return rows_ == cols_; }
  bool is_symmetric() const;

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Matrix transpose() const;
  Matrix column(std::size_t j) const;
  /// Columns [first, first+count) as a new matrix.
  Matrix columns(std::size_t first, std::size_t count) const;
  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  Matrix operator-() const;

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  std::string to_string() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = Matrix<BigInt>;
using RatMatrix = Matrix<Rational>;

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
IntMatrix operator+(const IntMatrix& a, const IntMatrix& b);
RatMatrix operator*(const RatMatrix& a, const RatMatrix& b);
RatMatrix to_rational(const IntMatrix& m);

/// Block-diagonal sum diag(a, b).
IntMatrix block_diagonal(const IntMatrix& a, const IntMatrix& b);
/// Horizontal concatenation [a | b]; row counts must agree.
IntMatrix hconcat(const IntMatrix& a, const IntMatrix& b);
IntMatrix diagonal(const std::vector<BigInt>& entries);

/// Fraction-free (Bareiss) determinant. Requires a square matrix.
BigInt determinant(const IntMatrix& m);

struct SmithForm {
  IntMatrix d;  ///< diagonal, d_i >= 0, d_i | d_{i+1}
  IntMatrix u;  ///< unimodular, rows x rows
  IntMatrix v;  ///< unimodular, cols x cols
  std::size_t rank = 0;

  /// Diagonal entries d_0..d_{min(rows,cols)-1}.
  std::vector<BigInt> diagonal() const;
};

/// Smith normal form with transforms: d = u * m * v.
SmithForm smith_normal_form(const IntMatrix& m);

struct KernelSplit {
  IntMatrix kernel;      ///< columns: basis of {x : m x = 0}, saturated
  IntMatrix complement;  ///< columns: basis of a complement; [kernel | complement] is unimodular
};

KernelSplit saturated_kernel(const IntMatrix& m);

std::size_t rank(const IntMatrix& m);

/// Exact inverse over Q. Throws Error(SingularMatrix) when det = 0.
RatMatrix rational_inverse(const IntMatrix& m);

bool is_unimodular_matrix(const IntMatrix& m);

}  // namespace quadtmf
