#pragma once

// Independent reference computations. Nothing here calls the library's
// algorithms; only its value types are shared.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "quadtmf/bilform.hpp"
#include "quadtmf/discform.hpp"

namespace oracle {

using quadtmf::BigInt;
using quadtmf::BilinearForm;
using quadtmf::IntMatrix;
using quadtmf::Rational;

/// Laplace expansion along the first row.
inline BigInt laplace_det(const IntMatrix& m) {
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  if (n == 1) return m(0, 0);
  BigInt det = 0;
  for (std::size_t c = 0; c < n; ++c) {
    if (m(0, c) == 0) continue;
    IntMatrix minor(n - 1, n - 1);
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = 0, k = 0; j < n; ++j)
        if (j != c) minor(i - 1, k++) = m(i, j);
    const BigInt term = m(0, c) * laplace_det(minor);
    det += c % 2 ? BigInt(-term) : term;
  }
  return det;
}

inline void subsets(std::size_t n, std::size_t k, std::size_t start, std::vector<std::size_t>& cur,
                    std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < n; ++i) {
    cur.push_back(i);
    subsets(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

/// Invariant factors from determinantal divisors: D_k = gcd of k x k minors,
/// d_k = D_k / D_{k-1}.
inline std::vector<BigInt> invariant_factors(const IntMatrix& m) {
  const std::size_t r = std::min(m.rows(), m.cols());
  std::vector<BigInt> out;
  BigInt prev = 1;
  for (std::size_t k = 1; k <= r; ++k) {
    std::vector<std::vector<std::size_t>> rows, cols;
    std::vector<std::size_t> cur;
    subsets(m.rows(), k, 0, cur, rows);
    subsets(m.cols(), k, 0, cur, cols);
    BigInt g = 0;
    for (const auto& rs : rows)
      for (const auto& cs : cols) {
        IntMatrix sub(k, k);
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < k; ++j) sub(i, j) = m(rs[i], cs[j]);
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), BigInt(laplace_det(sub)).get_mpz_t());
      }
    if (g == 0) {
      out.push_back(0);
      prev = 0;
      continue;
    }
    out.push_back(prev == 0 ? BigInt(0) : BigInt(g / prev));
    prev = g;
  }
  return out;
}

/// Cyclic Jacobi eigenvalue iteration; returns (positive, negative, zero) counts.
inline std::array<std::size_t, 3> float_inertia(const IntMatrix& m) {
  const std::size_t n = m.rows();
  std::vector<double> a(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i * n + j] = m(i, j).get_d();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a[i * n + j] * a[i * n + j];
    if (off < 1e-24) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (a[q * n + q] - a[p * n + p]) / (2 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        const double c = 1 / std::sqrt(t * t + 1), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k * n + p], akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p * n + k], aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
      }
  }
  std::array<std::size_t, 3> out{0, 0, 0};
  for (std::size_t i = 0; i < n; ++i) {
    const double e = a[i * n + i];
    ++out[e > 1e-9 ? 0 : (e < -1e-9 ? 1 : 2)];
  }
  return out;
}

/// Vectors counted by b(x,x) over the box |x_i| <= radius.
inline std::vector<std::uint64_t> box_norm_counts(const BilinearForm& b, long max_norm, long radius) {
  const std::size_t n = b.rank();
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(max_norm) + 1, 0);
  std::vector<long> x(n, -radius);
  if (n == 0) {
    counts[0] = 1;
    return counts;
  }
  for (;;) {
    long norm = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) norm += b(i, j).get_si() * x[i] * x[j];
    if (norm >= 0 && norm <= max_norm) ++counts[static_cast<std::size_t>(norm)];
    std::size_t k = 0;
    while (k < n && x[k] == radius) x[k++] = -radius;
    if (k == n) break;
    ++x[k];
  }
  return counts;
}

/// Theta coefficients of D_n^+ in its coordinate model: x in Z^n or (Z+1/2)^n
/// with even coordinate sum, counted by x.x/2 = m for m < truncation.
inline std::vector<BigInt> dn_plus_theta(std::size_t n, long truncation) {
  // Work with y = 2x: all-even or all-odd integer vectors with y.y = 8m and
  // sum(y) = 0 mod 4.
  const long max4 = 8 * (truncation - 1);
  auto count = [&](bool odd) {
    // table[s][r] = number of partial vectors with y.y = s and sum = r mod 4.
    std::vector<std::array<BigInt, 4>> table(static_cast<std::size_t>(max4) + 1);
    table[0][0] = 1;
    for (std::size_t c = 0; c < n; ++c) {
      std::vector<std::array<BigInt, 4>> next(table.size());
      for (long s = 0; s <= max4; ++s)
        for (int r = 0; r < 4; ++r) {
          if (table[static_cast<std::size_t>(s)][r] == 0) continue;
          for (long y = -64; y <= 64; ++y) {
            if ((y % 2 != 0) != odd) continue;
            const long t = s + y * y;
            if (t > max4) continue;
            const int rr = static_cast<int>(((r + y) % 4 + 4) % 4);
            next[static_cast<std::size_t>(t)][rr] += table[static_cast<std::size_t>(s)][r];
          }
        }
      table = std::move(next);
    }
    std::vector<BigInt> out(static_cast<std::size_t>(truncation), BigInt(0));
    for (long m = 0; m < truncation; ++m) out[static_cast<std::size_t>(m)] = table[static_cast<std::size_t>(8 * m)][0];
    return out;
  };
  std::vector<BigInt> even = count(false), odd = count(true);
  for (std::size_t i = 0; i < even.size(); ++i) even[i] += odd[i];
  return even;
}

inline BigInt sigma(unsigned k, long n) {
  BigInt s = 0;
  for (long d = 1; d <= n; ++d)
    if (n % d == 0) {
      BigInt p = 1;
      for (unsigned i = 0; i < k; ++i) p *= d;
      s += p;
    }
  return s;
}

inline std::vector<BigInt> convolve(const std::vector<BigInt>& a, const std::vector<BigInt>& b, std::size_t len) {
  std::vector<BigInt> c(len, BigInt(0));
  for (std::size_t i = 0; i < a.size() && i < len; ++i)
    for (std::size_t j = 0; j < b.size() && i + j < len; ++j) c[i + j] += a[i] * b[j];
  return c;
}

/// Delta = (E4^3 - E6^2) / 1728 on [0, len).
inline std::vector<BigInt> delta_from_eisenstein(std::size_t len) {
  std::vector<BigInt> e4(len), e6(len);
  for (std::size_t n = 0; n < len; ++n) {
    e4[n] = n == 0 ? BigInt(1) : BigInt(240 * sigma(3, static_cast<long>(n)));
    e6[n] = n == 0 ? BigInt(1) : BigInt(-504 * sigma(5, static_cast<long>(n)));
  }
  const auto e4c = convolve(convolve(e4, e4, len), e4, len);
  const auto e6s = convolve(e6, e6, len);
  std::vector<BigInt> d(len);
  for (std::size_t n = 0; n < len; ++n) d[n] = (e4c[n] - e6s[n]) / 1728;
  return d;
}

inline Rational frac(const Rational& x) {
  BigInt f;
  mpz_fdiv_q(f.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  Rational r = x - Rational(f);
  r.canonicalize();
  return r;
}

/// Histogram of x^T B^{-1} x mod 1 over the discriminant group of a
/// nondegenerate b, enumerated as B^{-1} Z^r / Z^r with a cofactor inverse.
inline std::map<Rational, std::size_t> discriminant_histogram(const BilinearForm& b) {
  const std::size_t r = b.rank();
  const BigInt det = laplace_det(b.gram());
  std::vector<std::vector<Rational>> inv(r, std::vector<Rational>(r));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      IntMatrix minor(r - 1, r - 1);
      for (std::size_t a = 0, ra = 0; a < r; ++a) {
        if (a == j) continue;
        for (std::size_t c = 0, rc = 0; c < r; ++c)
          if (c != i) minor(ra, rc++) = b(a, c);
        ++ra;
      }
      Rational v(laplace_det(minor), det);
      v.canonicalize();
      inv[i][j] = (i + j) % 2 ? Rational(-v) : v;
    }
  const long box = std::abs(det.get_si());
  std::set<std::vector<Rational>> seen;
  std::map<Rational, std::size_t> hist;
  std::vector<long> x(r, 0);
  for (;;) {
    std::vector<Rational> y(r);
    for (std::size_t i = 0; i < r; ++i) {
      Rational s = 0;
      for (std::size_t j = 0; j < r; ++j) s += inv[i][j] * x[j];
      y[i] = frac(s);
    }
    if (seen.insert(y).second) {
      Rational q = 0;
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) q += Rational(x[i]) * inv[i][j] * x[j];
      ++hist[frac(q)];
    }
    std::size_t k = 0;
    while (k < r && x[k] == box - 1) x[k++] = 0;
    if (k == r) break;
    ++x[k];
  }
  return hist;
}

/// Histogram of lambda(g, g) over all elements of a torsion linking form.
inline std::map<Rational, std::size_t> torsion_histogram(const quadtmf::TorsionLinkingForm& t) {
  std::map<Rational, std::size_t> hist;
  std::vector<BigInt> g(t.size(), BigInt(0));
  for (;;) {
    ++hist[t.evaluate(g, g)];
    std::size_t k = 0;
    while (k < g.size() && g[k] == t.factors()[k] - 1) g[k++] = 0;
    if (k == g.size()) break;
    g[k] += 1;
  }
  return hist;
}

inline IntMatrix random_symmetric(std::size_t n, long bound, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> pick(-bound, bound);
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      m(i, j) = pick(rng);
      m(j, i) = m(i, j);
    }
  return m;
}

/// Product of random elementary matrices: unimodular with small entries.
inline IntMatrix random_unimodular(std::size_t n, std::size_t steps, std::mt19937_64& rng) {
  IntMatrix u = IntMatrix::identity(n);
  if (n < 2) {
    if (n == 1 && rng() % 2) u(0, 0) = -1;
    return u;
  }
  std::uniform_int_distribution<std::size_t> idx(0, n - 1);
  for (std::size_t s = 0; s < steps; ++s) {
    const std::size_t i = idx(rng), j = idx(rng);
    if (i == j) continue;
    const long c = rng() % 2 ? 1 : -1;
    for (std::size_t r = 0; r < n; ++r) u(r, j) += c * u(r, i);
  }
  return u;
}

}  // namespace oracle
