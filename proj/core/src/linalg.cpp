#include "quadtmf/linalg.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace quadtmf {

template <class T>
Matrix<T>::Matrix(std::initializer_list<std::initializer_list<T>> init) {
  rows_ = init.size();
  cols_ = rows_ == 0 ? 0 : init.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& row : init) {
    if (row.size() != cols_) throw Error(ErrorCode::DimensionMismatch, "ragged matrix literal");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

template <class T>
Matrix<T> Matrix<T>::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

template <class T>
bool Matrix<T>::is_symmetric() const {
  if (!is_square()) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i + 1; j < cols_; ++j)
      if ((*this)(i, j) != (*this)(j, i)) return false;
  return true;
}

template <class T>
Matrix<T> Matrix<T>::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

template <class T>
Matrix<T> Matrix<T>::column(std::size_t j) const {
  return columns(j, 1);
}

template <class T>
Matrix<T> Matrix<T>::columns(std::size_t first, std::size_t count) const {
  return block(0, first, rows_, count);
}

template <class T>
Matrix<T> Matrix<T>::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw Error(ErrorCode::DimensionMismatch, "block out of range");
  Matrix b(nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
  return b;
}

template <class T>
Matrix<T> Matrix<T>::operator-() const {
  Matrix n(*this);
  for (auto& x : n.data_) x = -x;
  return n;
}

template <class T>
std::string Matrix<T>::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < rows_; ++i) {
    os << (i ? ",[" : "[");
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? "," : "") << (*this)(i, j);
    os << ']';
  }
  os << ']';
  return os.str();
}

template class Matrix<BigInt>;
template class Matrix<Rational>;

namespace {

template <class T>
Matrix<T> multiply(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows()) throw Error(ErrorCode::DimensionMismatch, "matrix product shape mismatch");
  Matrix<T> c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
    }
  return c;
}

}  // namespace

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) { return multiply(a, b); }
RatMatrix operator*(const RatMatrix& a, const RatMatrix& b) { return multiply(a, b); }

IntMatrix operator+(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorCode::DimensionMismatch, "matrix sum shape mismatch");
  IntMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
  return c;
}

RatMatrix to_rational(const IntMatrix& m) {
  RatMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = Rational(m(i, j));
  return r;
}

IntMatrix block_diagonal(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix c(a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) c(a.rows() + i, a.cols() + j) = b(i, j);
  return c;
}

IntMatrix hconcat(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows() && a.cols() != 0 && b.cols() != 0)
    throw Error(ErrorCode::DimensionMismatch, "hconcat row mismatch");
  const std::size_t rows = a.cols() ? a.rows() : b.rows();
  IntMatrix c(rows, a.cols() + b.cols());
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) c(i, a.cols() + j) = b(i, j);
  }
  return c;
}

IntMatrix diagonal(const std::vector<BigInt>& entries) {
  IntMatrix m(entries.size(), entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
  return m;
}

BigInt determinant(const IntMatrix& m) {
  if (!m.is_square()) throw Error(ErrorCode::DimensionMismatch, "determinant of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  IntMatrix a = m;
  BigInt sign = 1;
  BigInt prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        BigInt t = a(i, j) * a(k, k) - a(i, k) * a(k, j);
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        a(i, j) = t;
      }
      a(i, k) = 0;
    }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

std::vector<BigInt> SmithForm::diagonal() const {
  std::vector<BigInt> out;
  for (std::size_t i = 0; i < std::min(d.rows(), d.cols()); ++i) out.push_back(d(i, i));
  return out;
}

namespace {

// Row/column operations applied simultaneously to the working matrix and the
// accumulated transforms so that d = u * m * v holds after every step.
struct SmithState {
  IntMatrix a, u, v;

  void swap_rows(std::size_t i, std::size_t k) {
    if (i == k) return;
    for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(i, j), a(k, j));
    for (std::size_t j = 0; j < u.cols(); ++j) std::swap(u(i, j), u(k, j));
  }
  void swap_cols(std::size_t j, std::size_t k) {
    if (j == k) return;
    for (std::size_t i = 0; i < a.rows(); ++i) std::swap(a(i, j), a(i, k));
    for (std::size_t i = 0; i < v.rows(); ++i) std::swap(v(i, j), v(i, k));
  }
  // row_i += q * row_k
  void add_row(std::size_t i, std::size_t k, const BigInt& q) {
    for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) += q * a(k, j);
    for (std::size_t j = 0; j < u.cols(); ++j) u(i, j) += q * u(k, j);
  }
  // col_j += q * col_k
  void add_col(std::size_t j, std::size_t k, const BigInt& q) {
    for (std::size_t i = 0; i < a.rows(); ++i) a(i, j) += q * a(i, k);
    for (std::size_t i = 0; i < v.rows(); ++i) v(i, j) += q * v(i, k);
  }
  void negate_row(std::size_t i) {
    for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) = -a(i, j);
    for (std::size_t j = 0; j < u.cols(); ++j) u(i, j) = -u(i, j);
  }
};

}  // namespace

SmithForm smith_normal_form(const IntMatrix& m) {
  const std::size_t R = m.rows();
  const std::size_t C = m.cols();
  SmithState s{m, IntMatrix::identity(R), IntMatrix::identity(C)};
  IntMatrix& a = s.a;

  std::size_t t = 0;
  for (; t < std::min(R, C); ++t) {
    // Smallest nonzero entry of the trailing block becomes the pivot.
    bool found = false;
    std::size_t pi = t, pj = t;
    for (std::size_t i = t; i < R; ++i)
      for (std::size_t j = t; j < C; ++j)
        if (a(i, j) != 0 && (!found || abs(a(i, j)) < abs(a(pi, pj)))) {
          found = true;
          pi = i;
          pj = j;
        }
    if (!found) break;
    s.swap_rows(t, pi);
    s.swap_cols(t, pj);

    for (;;) {
      for (std::size_t i = t + 1; i < R; ++i)
        if (a(i, t) != 0) {
          BigInt q = a(i, t) / a(t, t);
          s.add_row(i, t, -q);
        }
      for (std::size_t j = t + 1; j < C; ++j)
        if (a(t, j) != 0) {
          BigInt q = a(t, j) / a(t, t);
          s.add_col(j, t, -q);
        }

      // Remainders left in the pivot row/column are strictly smaller than the
      // pivot; swap the smallest one in and repeat.
      bool dirty = false;
      std::size_t bi = t, bj = t;
      BigInt best = abs(a(t, t));
      for (std::size_t i = t + 1; i < R; ++i)
        if (a(i, t) != 0 && abs(a(i, t)) < best) {
          best = abs(a(i, t));
          bi = i;
          bj = t;
          dirty = true;
        }
      for (std::size_t j = t + 1; j < C; ++j)
        if (a(t, j) != 0 && abs(a(t, j)) < best) {
          best = abs(a(t, j));
          bi = t;
          bj = j;
          dirty = true;
        }
      if (dirty) {
        s.swap_rows(t, bi);
        s.swap_cols(t, bj);
        continue;
      }

      // Enforce d_t | every entry of the trailing block.
      bool fixed = false;
      for (std::size_t i = t + 1; i < R && !fixed; ++i)
        for (std::size_t j = t + 1; j < C && !fixed; ++j)
          if (a(i, j) % a(t, t) != 0) {
            s.add_row(t, i, 1);
            fixed = true;
          }
      if (!fixed) break;
    }
    if (a(t, t) < 0) s.negate_row(t);
  }

  SmithForm out;
  out.d = std::move(s.a);
  out.u = std::move(s.u);
  out.v = std::move(s.v);
  out.rank = t;
  return out;
}

KernelSplit saturated_kernel(const IntMatrix& m) {
  SmithForm snf = smith_normal_form(m);
  const std::size_t C = m.cols();
  KernelSplit out;
  out.kernel = snf.v.columns(snf.rank, C - snf.rank);
  out.complement = snf.v.columns(0, snf.rank);
  for (std::size_t j = 0; j < out.kernel.cols(); ++j) {
    std::size_t i = 0;
    while (i < C && out.kernel(i, j) == 0) ++i;
    if (i < C && out.kernel(i, j) < 0)
      for (std::size_t r = 0; r < C; ++r) out.kernel(r, j) = -out.kernel(r, j);
  }
  return out;
}

std::size_t rank(const IntMatrix& m) { return smith_normal_form(m).rank; }

RatMatrix rational_inverse(const IntMatrix& m) {
  if (!m.is_square()) throw Error(ErrorCode::DimensionMismatch, "inverse of a non-square matrix");
  const std::size_t n = m.rows();
  RatMatrix a = to_rational(m);
  RatMatrix inv = RatMatrix::identity(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a(p, k) == 0) ++p;
    if (p == n) throw Error(ErrorCode::SingularMatrix, "matrix is singular (det = 0)");
    if (p != k)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(k, j), a(p, j));
        std::swap(inv(k, j), inv(p, j));
      }
    const Rational piv = a(k, k);
    for (std::size_t j = 0; j < n; ++j) {
      a(k, j) /= piv;
      inv(k, j) /= piv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || a(i, k) == 0) continue;
      const Rational f = a(i, k);
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) -= f * a(k, j);
        inv(i, j) -= f * inv(k, j);
      }
    }
  }
  return inv;
}

bool is_unimodular_matrix(const IntMatrix& m) {
  if (!m.is_square()) return false;
  return abs(determinant(m)) == 1;
}

}  // namespace quadtmf
