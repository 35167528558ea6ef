#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "quadtmf/discform.hpp"

using namespace quadtmf;

TEST_CASE("discriminant of small forms") {
  const DiscriminantData five = discriminant(BilinearForm::diagonal({5}));
  CHECK(five.free_rank == 0);
  CHECK(five.factors() == std::vector<BigInt>{5});
  CHECK(five.torsion.pairing()(0, 0) == Rational(1, 5));

  const DiscriminantData zero = discriminant(BilinearForm::zero(1));
  CHECK(zero.free_rank == 1);
  CHECK(zero.torsion.trivial());

  CHECK(discriminant(BilinearForm::diagonal({1, -1})).torsion.trivial());
  CHECK(discriminant(builtin_form("E8")).torsion.trivial());
  CHECK(discriminant(builtin_form("A2")).factors() == std::vector<BigInt>{3});
  CHECK(discriminant(builtin_form("D4")).factors() == std::vector<BigInt>{2, 2});
}

TEST_CASE("linking values match the discriminant group oracle") {
  std::mt19937_64 rng(31);
  int tested = 0;
  while (tested < 150) {
    const std::size_t n = 1 + rng() % 3;
    const BilinearForm b(oracle::random_symmetric(n, 3, rng));
    const BigInt det = oracle::laplace_det(b.gram());
    if (det == 0 || abs(det) > 40) continue;
    ++tested;
    const DiscriminantData d = discriminant(b);
    CHECK(d.torsion.order() == abs(det));
    CHECK(oracle::torsion_histogram(d.torsion) == oracle::discriminant_histogram(b));
  }
}

TEST_CASE("linking values respect the orders") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 4;
    const BilinearForm b(oracle::random_symmetric(n, 3, rng));
    const TorsionLinkingForm t = discriminant(b).torsion;
    for (std::size_t i = 0; i < t.size(); ++i)
      for (std::size_t j = 0; j < t.size(); ++j) {
        const Rational v = t.factors()[i] * t.pairing()(i, j);
        CHECK(v.get_den() == 1);
        CHECK(t.pairing()(i, j) == t.pairing()(j, i));
        CHECK(t.pairing()(i, j) >= 0);
        CHECK(t.pairing()(i, j) < 1);
      }
    for (std::size_t i = 0; i + 1 < t.size(); ++i) CHECK(t.factors()[i + 1] % t.factors()[i] == 0);
  }
}

TEST_CASE("discriminant is invariant under congruence and stabilization") {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 4;
    const BilinearForm b(oracle::random_symmetric(n, 3, rng));
    const DiscriminantData d = discriminant(b);
    const IntMatrix u = oracle::random_unimodular(n, 8, rng);
    const DiscriminantData e = discriminant(pullback(u, b));
    CHECK(e.free_rank == d.free_rank);
    CHECK(torsion_forms_isomorphic(d.torsion, e.torsion).is_true());
    const DiscriminantData s = discriminant(stabilize(b, rng() % 2, rng() % 2));
    CHECK(s.free_rank == d.free_rank);
    CHECK(torsion_forms_isomorphic(d.torsion, s.torsion).is_true());
  }
}

TEST_CASE("torsion form isomorphism") {
  const auto a = TorsionLinkingForm::cyclic(5, Rational(1, 5));
  CHECK(torsion_forms_isomorphic(a, TorsionLinkingForm::cyclic(5, Rational(4, 5))).is_true());
  CHECK(torsion_forms_isomorphic(a, TorsionLinkingForm::cyclic(5, Rational(2, 5))).is_false());
  CHECK(torsion_forms_isomorphic(a, a).is_true());
  CHECK(torsion_forms_isomorphic(a, TorsionLinkingForm::cyclic(7, Rational(1, 7))).is_false());
  const auto big = TorsionLinkingForm::cyclic(100003, Rational(1, 100003));
  CHECK(torsion_forms_isomorphic(big, big, 1000).is_true());
  CHECK_THROWS_AS(torsion_forms_isomorphic(big, TorsionLinkingForm::cyclic(100003, Rational(4, 100003)), 1000), Error);
}

TEST_CASE("orthogonal sums rediagonalize") {
  const auto two = TorsionLinkingForm::cyclic(2, Rational(1, 2));
  const auto three = TorsionLinkingForm::cyclic(3, Rational(1, 3));
  const TorsionLinkingForm six = orthogonal_sum(two, three);
  CHECK(six.factors() == std::vector<BigInt>{6});
  CHECK(oracle::torsion_histogram(six) == oracle::discriminant_histogram(BilinearForm::diagonal({2, 3})));
}

TEST_CASE("pm equivalence") {
  CHECK(pm_equivalent(BilinearForm::hyperbolic(), BilinearForm::diagonal({1, -1})).is_true());
  CHECK(pm_equivalent(BilinearForm::diagonal({5}), BilinearForm(IntMatrix{{2, 1}, {1, 3}})).is_false());
  const BilinearForm a2 = builtin_form("A2");
  CHECK(pm_equivalent(a2, stabilize(a2, 1, 1)).is_true());
  CHECK(pm_equivalent(BilinearForm::zero(1), BilinearForm::diagonal({1})).is_false());
}

TEST_CASE("pm equivalence is an equivalence relation on a pool") {
  std::vector<BilinearForm> pool;
  std::mt19937_64 rng(34);
  for (int i = 0; i < 18; ++i) pool.emplace_back(oracle::random_symmetric(1 + rng() % 2, 2, rng));
  pool.push_back(BilinearForm::diagonal({3}));
  pool.push_back(BilinearForm::diagonal({-3}));
  pool.push_back(stabilize(BilinearForm::diagonal({3}), 1, 0));
  for (const auto& a : pool) {
    CHECK(pm_equivalent(a, a).is_true());
    for (const auto& b : pool) {
      const bool ab = pm_equivalent(a, b).is_true();
      CHECK(ab == pm_equivalent(b, a).is_true());
      if (!ab) continue;
      for (const auto& c : pool)
        if (pm_equivalent(b, c).is_true()) CHECK(pm_equivalent(a, c).is_true());
    }
  }
}

TEST_CASE("oracle soundness on rank 3 forms") {
  // Every certified stable congruence must be seen by pm_equivalent.
  std::mt19937_64 rng(35);
  for (int trial = 0; trial < 40; ++trial) {
    const BilinearForm b(oracle::random_symmetric(1 + rng() % 3, 2, rng));
    const IntMatrix u = oracle::random_unimodular(b.rank(), 4, rng);
    const BilinearForm c = pullback(u, b);
    const Decision o = congruent_stably_bruteforce(b, c, 0, 2);
    if (o.is_true()) CHECK(pm_equivalent(b, c).is_true());
  }
}

TEST_CASE("orientation flag negates linking values") {
  const Rational plain = discriminant(BilinearForm::diagonal({5})).torsion.pairing()(0, 0);
  set_linking_orientation_negated(true);
  const Rational flipped = discriminant(BilinearForm::diagonal({5})).torsion.pairing()(0, 0);
  set_linking_orientation_negated(false);
  CHECK(plain == Rational(1, 5));
  CHECK(flipped == Rational(4, 5));
}

TEST_CASE("validation of torsion forms") {
  CHECK_THROWS_AS(TorsionLinkingForm({2, 3}, RatMatrix(2, 2)), Error);
  CHECK_THROWS_AS(TorsionLinkingForm({4}, RatMatrix{{Rational(1, 3)}}), Error);
  CHECK(format_rational(Rational(3, 2)) == "3/2");
  CHECK(mod_one(Rational(-1, 3)) == Rational(2, 3));
}
