#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "quadtmf/linalg.hpp"

using namespace quadtmf;

namespace {

bool is_diagonal_chain(const SmithForm& s) {
  const auto d = s.diagonal();
  for (std::size_t i = 0; i < s.d.rows(); ++i)
    for (std::size_t j = 0; j < s.d.cols(); ++j)
      if (i != j && s.d(i, j) != 0) return false;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] < 0) return false;
    if (i + 1 < d.size() && d[i] != 0 && d[i + 1] % d[i] != 0) return false;
    if (i + 1 < d.size() && d[i] == 0 && d[i + 1] != 0) return false;
  }
  return true;
}

IntMatrix random_matrix(std::size_t r, std::size_t c, long bound, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> pick(-bound, bound);
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = pick(rng);
  return m;
}

}  // namespace

TEST_CASE("smith form of small matrices") {
  const SmithForm s = smith_normal_form(IntMatrix{{2}});
  CHECK(s.d == IntMatrix{{2}});
  CHECK(s.u == IntMatrix{{1}});
  CHECK(s.v == IntMatrix{{1}});
  CHECK(smith_normal_form(IntMatrix{{0}}).d == IntMatrix{{0}});

  const IntMatrix m{{2, 1}, {1, 2}};
  const SmithForm t = smith_normal_form(m);
  CHECK(t.diagonal() == std::vector<BigInt>{1, 3});
  CHECK(t.u * m * t.v == t.d);
}

TEST_CASE("smith form agrees with determinantal divisors") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t r = 1 + rng() % 4, c = 1 + rng() % 4;
    const IntMatrix m = random_matrix(r, c, 6, rng);
    const SmithForm s = smith_normal_form(m);
    REQUIRE(s.u * m * s.v == s.d);
    CHECK(abs(determinant(s.u)) == 1);
    CHECK(abs(determinant(s.v)) == 1);
    CHECK(is_diagonal_chain(s));
    CHECK(s.diagonal() == oracle::invariant_factors(m));
  }
}

TEST_CASE("rank is invariant under unimodular multiplication") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 5;
    IntMatrix m = random_matrix(n, n, 3, rng);
    if (trial % 3 == 0 && n > 1)
      for (std::size_t j = 0; j < n; ++j) m(n - 1, j) = m(0, j) * 2;
    const IntMatrix u = oracle::random_unimodular(n, 8, rng), v = oracle::random_unimodular(n, 8, rng);
    CHECK(rank(u * m * v) == rank(m));
  }
}

TEST_CASE("determinant matches Laplace expansion") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = rng() % 6;
    const IntMatrix m = random_matrix(n, n, 9, rng);
    CHECK(determinant(m) == oracle::laplace_det(m));
  }
}

TEST_CASE("saturated kernel") {
  KernelSplit k0 = saturated_kernel(IntMatrix{{0}});
  CHECK(k0.kernel == IntMatrix{{1}});
  CHECK(saturated_kernel(IntMatrix{{1}}).kernel.cols() == 0);

  const IntMatrix m{{2, 4}, {1, 2}};
  const KernelSplit k = saturated_kernel(m);
  REQUIRE(k.kernel.cols() == 1);
  const BigInt x = k.kernel(0, 0), y = k.kernel(1, 0);
  CHECK(((x == 2 && y == -1) || (x == -2 && y == 1)));
  CHECK(abs(determinant(hconcat(k.kernel, k.complement))) == 1);

  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + rng() % 3;
    IntMatrix a = random_matrix(n, n, 4, rng);
    for (std::size_t j = 0; j < n; ++j) a(n - 1, j) = a(0, j) - a(1 % n, j);
    const IntMatrix g = a.transpose() * a;
    const KernelSplit s = saturated_kernel(g);
    const IntMatrix zero = g * s.kernel;
    for (std::size_t i = 0; i < zero.rows(); ++i)
      for (std::size_t j = 0; j < zero.cols(); ++j) CHECK(zero(i, j) == 0);
    CHECK(s.kernel.cols() + rank(g) == n);
    CHECK(abs(determinant(hconcat(s.kernel, s.complement))) == 1);
  }
}

TEST_CASE("rational inverse") {
  CHECK(rational_inverse(IntMatrix{{5}}) == RatMatrix{{Rational(1, 5)}});
  CHECK(rational_inverse(IntMatrix::identity(3)) == RatMatrix::identity(3));
  RatMatrix expect{{Rational(2, 3), Rational(-1, 3)}, {Rational(-1, 3), Rational(2, 3)}};
  CHECK(rational_inverse(IntMatrix{{2, 1}, {1, 2}}) == expect);
  CHECK_THROWS_AS(rational_inverse(IntMatrix{{1, 2}, {2, 4}}), Error);

  std::mt19937_64 rng(15);
  int tested = 0;
  while (tested < 1000) {
    const std::size_t n = 1 + rng() % 4;
    const IntMatrix m = random_matrix(n, n, 5, rng);
    if (determinant(m) == 0) continue;
    ++tested;
    CHECK(rational_inverse(m) * to_rational(m) == RatMatrix::identity(n));
  }
}

TEST_CASE("entries beyond machine words") {
  IntMatrix m{{BigInt("123456789012345678901234567890"), 1}, {1, 0}};
  CHECK(determinant(m) == -1);
  CHECK(is_unimodular_matrix(m));
  const SmithForm s = smith_normal_form(m);
  CHECK(s.u * m * s.v == s.d);
}
