#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "quadtmf/bilform.hpp"
#include "quadtmf/linalg.hpp"

using namespace quadtmf;

TEST_CASE("signature of named examples") {
  const SignatureRecord one = signature(BilinearForm::diagonal({1}));
  CHECK(one.b_plus == 1);
  CHECK(one.b_minus == 0);
  CHECK(one.parity == Parity::Odd);
  CHECK(one.det == 1);
  CHECK(one.unimodular);

  const SignatureRecord h = signature(BilinearForm::hyperbolic());
  CHECK(h.b_plus == 1);
  CHECK(h.b_minus == 1);
  CHECK(h.parity == Parity::Even);
  CHECK(h.det == -1);

  const SignatureRecord e8 = signature(builtin_form("E8"));
  CHECK(e8.b_plus == 8);
  CHECK(e8.b_zero == 0);
  CHECK(e8.parity == Parity::Even);
  CHECK(e8.det == 1);

  const SignatureRecord hh = signature(direct_sum(BilinearForm::hyperbolic(), BilinearForm::hyperbolic()));
  CHECK(hh.b_plus == 2);
  CHECK(hh.b_minus == 2);
}

TEST_CASE("signature agrees with floating eigenvalues") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 5;
    const BilinearForm b(oracle::random_symmetric(n, 3, rng));
    const SignatureRecord s = signature(b);
    const auto f = oracle::float_inertia(b.gram());
    CHECK(s.b_plus == f[0]);
    CHECK(s.b_minus == f[1]);
    CHECK(s.b_zero == f[2]);
  }
}

TEST_CASE("signature is a congruence invariant") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 6;
    const BilinearForm b(oracle::random_symmetric(n, 3, rng));
    const IntMatrix u = oracle::random_unimodular(n, 10, rng);
    CHECK(signature(pullback(u, b)) == signature(b));
  }
}

TEST_CASE("pullback") {
  const BilinearForm b = BilinearForm::diagonal({1, -1});
  CHECK(pullback(IntMatrix::identity(2), b) == b);

  const IntMatrix a{{1, 1}, {-1, 0}, {0, 1}};
  CHECK(pullback(a, BilinearForm::diagonal({1, -1, -1})).gram() == IntMatrix{{0, 1}, {1, 0}});
  CHECK_THROWS_AS(pullback(IntMatrix::identity(3), b), Error);

  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng() % 4;
    const BilinearForm c(oracle::random_symmetric(n, 3, rng));
    const IntMatrix a1 = oracle::random_unimodular(n, 5, rng), a2 = oracle::random_unimodular(n, 5, rng);
    CHECK(pullback(a1 * a2, c) == pullback(a2, pullback(a1, c)));
  }
}

TEST_CASE("direct sums") {
  const BilinearForm b = builtin_form("A2");
  CHECK(direct_sum(b, BilinearForm()) == b);
  CHECK(direct_sum(BilinearForm::diagonal({1}), BilinearForm::diagonal({-1})) == BilinearForm::diagonal({1, -1}));
}

TEST_CASE("quadratic and bilinear forms") {
  QuadraticForm q{IntMatrix{{1}}};
  CHECK(qform_convert(q) == BilinearForm::diagonal({2}));
  CHECK(inverse_partial(BilinearForm::diagonal({2})) == q);
  CHECK_THROWS_AS(inverse_partial(BilinearForm::diagonal({1})), Error);
  try {
    inverse_partial(BilinearForm::diagonal({1}));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonEvenDiagonal);
  }

  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 5;
    IntMatrix g = oracle::random_symmetric(n, 3, rng);
    for (std::size_t i = 0; i < n; ++i) g(i, i) *= 2;
    const BilinearForm b(g);
    CHECK(qform_convert(inverse_partial(b)) == b);
    const QuadraticForm p = inverse_partial(b);
    CHECK(inverse_partial(qform_convert(p)) == p);
  }
}

TEST_CASE("radical split") {
  const RadicalSplit z = radical_split(BilinearForm::zero(1));
  CHECK(z.zero_rank == 1);
  CHECK(z.core.rank() == 0);

  const BilinearForm nd = builtin_form("A2");
  const RadicalSplit s = radical_split(nd);
  CHECK(s.zero_rank == 0);
  CHECK(s.core == nd);
  CHECK(s.basis_change == IntMatrix::identity(2));

  const RadicalSplit t = radical_split(BilinearForm(IntMatrix{{0, 0}, {0, 3}}));
  CHECK(t.zero_rank == 1);
  CHECK(t.core == BilinearForm::diagonal({3}));

  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 5;
    const BilinearForm b(oracle::random_symmetric(n, 2, rng));
    const RadicalSplit r = radical_split(b);
    std::size_t zeros = 0;
    for (const auto& d : smith_normal_form(b.gram()).diagonal()) zeros += d == 0;
    CHECK(r.zero_rank == zeros);
    CHECK(pullback(r.basis_change, b) == direct_sum(BilinearForm::zero(r.zero_rank), r.core));
    CHECK(is_unimodular_matrix(r.basis_change));
  }
}

TEST_CASE("stable form of unimodular forms") {
  CHECK(unimodular_stable_form(BilinearForm::hyperbolic()) == StableCounts{1, 1});
  CHECK(unimodular_stable_form(builtin_form("E8")) == StableCounts{8, 0});
  CHECK(unimodular_stable_form(BilinearForm::diagonal({1, 1, -1})) == StableCounts{2, 1});
  const StableCounts sum = unimodular_stable_form(direct_sum(BilinearForm::hyperbolic(), builtin_form("E8")));
  CHECK(sum == StableCounts{9, 1});
  CHECK_THROWS_AS(unimodular_stable_form(BilinearForm::diagonal({2})), Error);
}

TEST_CASE("stable congruence search") {
  const BilinearForm b = builtin_form("A2");
  CHECK(congruent_stably_bruteforce(b, b, 0, 1).is_true());
  const BilinearForm h = BilinearForm::hyperbolic();
  CHECK(congruent_stably_bruteforce(h, BilinearForm::diagonal({1, -1}), 1, 2).is_true());
  const Decision d = congruent_stably_bruteforce(BilinearForm::diagonal({2}), BilinearForm::diagonal({3}), 1, 2);
  CHECK_FALSE(d.is_decided());
  CHECK(congruent_stably_bruteforce(BilinearForm::zero(1), BilinearForm::diagonal({1}), 1, 1).is_false());

  const auto u = find_congruence(BilinearForm::diagonal({1, -1, 1}), direct_sum(h, BilinearForm::diagonal({1})), 2);
  REQUIRE(u.has_value());
  CHECK(pullback(*u, BilinearForm::diagonal({1, -1, 1})) == direct_sum(h, BilinearForm::diagonal({1})));
}

TEST_CASE("construction rejects bad matrices") {
  CHECK_THROWS_AS(BilinearForm(IntMatrix{{1, 2}, {3, 4}}), Error);
  CHECK_THROWS_AS(BilinearForm(IntMatrix(2, 3)), Error);
}

TEST_CASE("builtin registry") {
  for (const auto& name : builtin_form_names()) {
    const BilinearForm& b = builtin_form(name);
    CHECK(b.label() == name);
  }
  CHECK(signature(builtin_form("D16+")).b_plus == 16);
  CHECK(signature(builtin_form("D16+")).unimodular);
  CHECK(builtin_form("D16+").is_even());
  CHECK_THROWS_AS(builtin_form("nope"), Error);
  CHECK_THROWS_AS(load_named_forms(R"({"schema":"quadtmf.named_forms","version":1,"forms":[
    {"name":"bad","require":{"even":true},"gram":[["1"]]}]})"),
                  Error);
}
