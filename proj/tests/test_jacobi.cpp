#include <doctest.h>

#include <cmath>
#include <random>

#include "quadtmf/jacobi.hpp"

using namespace quadtmf;

namespace {

const long double kPi = std::acos(-1.0L);
const Complex kI(0, 1);

// Direct one-dimensional sum for the form (2k).
Complex rank_one_theta(long k, const Complex& tau, const Complex& z) {
  Complex s = 0;
  for (long n = -60; n <= 60; ++n) {
    const long double nn = static_cast<long double>(n);
    s += std::exp(kI * kPi * tau * (2.0L * k * nn * nn) + 2.0L * kI * kPi * nn * (2.0L * k) * z);
  }
  return s;
}

JacobiEvaluator evaluator_for(const BilinearForm& b, const std::vector<JacobiPoint>& pts,
                              const JacobiElement& g, long double tol) {
  std::vector<JacobiPoint> all = pts;
  for (const auto& p : pts) all.push_back(act(g, p));
  return JacobiEvaluator(b, JacobiEvaluator::required_cutoff(b, all, tol / 100), 64);
}

}  // namespace

TEST_CASE("values near the cusp") {
  const BilinearForm two = BilinearForm::diagonal({2});
  const JacobiEvaluator ev(two, 4);
  const ThetaValue v = ev.theta_eval({Complex(0, 5), {Complex(0)}});
  CHECK(std::abs(v.value - Complex(1)) < 1e-12L);
  CHECK(v.tail_bound <= 1e-10L);
}

TEST_CASE("rank one values match a direct sum") {
  std::mt19937_64 rng(81);
  for (long k : {1L, 2L, 3L}) {
    const BilinearForm b = BilinearForm::diagonal({2 * k});
    const auto pts = random_points(1, 6, rng);
    const JacobiEvaluator ev(b, JacobiEvaluator::required_cutoff(b, pts, 1e-14L));
    for (const auto& p : pts) {
      const Complex got = ev.theta_eval(p, 1e-12L).value;
      CHECK(std::abs(got - rank_one_theta(k, p.tau, p.z[0])) < 1e-12L);
    }
  }
}

TEST_CASE("SL2 group elements") {
  const Sl2 s = named_sl2("S"), t = named_sl2("T");
  CHECK(s * s == Sl2{-1, 0, 0, -1});
  CHECK((s * t) * (s * t) * (s * t) == Sl2{-1, 0, 0, -1});
  CHECK(named_sl2("I") == Sl2{});
  CHECK_THROWS_AS(named_sl2("U"), Error);
  std::mt19937_64 rng(82);
  for (int i = 0; i < 20; ++i) {
    const Sl2 g = random_sl2(3, rng);
    CHECK(g.a * g.d - g.b * g.c == 1);
  }
}

TEST_CASE("actions") {
  const JacobiPoint p{Complex(0.1L, 1.2L), {Complex(0.2L, 0.01L), Complex(-0.1L, 0.02L)}};
  const JacobiPoint st = act(named_sl2("S"), p);
  CHECK(std::abs(st.tau + 1.0L / p.tau) < 1e-15L);
  CHECK(std::abs(st.z[0] - p.z[0] / p.tau) < 1e-15L);
  const JacobiPoint sh = act(LatticeShift{{1, 0}, {0, 2}}, p);
  CHECK(std::abs(sh.z[0] - (p.z[0] + p.tau)) < 1e-15L);
  CHECK(std::abs(sh.z[1] - (p.z[1] + 2.0L)) < 1e-15L);
  CHECK_THROWS_AS(act(Sl2{2, 0, 0, 1}, p), Error);
  CHECK_THROWS_AS(act(named_sl2("S"), JacobiPoint{Complex(0, -1), {}}), Error);
  CHECK_THROWS_AS(act(LatticeShift{{1}, {0}}, p), Error);
}

TEST_CASE("cocycle factors") {
  const BilinearForm b = builtin_form("E8");
  std::mt19937_64 rng(83);
  const auto pts = random_points(8, 3, rng);
  for (const auto& p : pts) CHECK(std::abs(cocycle_factor(b, named_sl2("I"), p) - Complex(1)) < 1e-15L);
  JacobiPoint origin = pts[0];
  for (auto& zi : origin.z) zi = 0;
  CHECK(std::abs(cocycle_factor(b, named_sl2("S"), origin) - Complex(1)) < 1e-15L);
  CHECK(std::abs(cocycle_factor(b, LatticeShift{std::vector<long>(8, 0), std::vector<long>(8, 1)}, pts[1]) - Complex(1)) <
        1e-15L);
  CHECK_THROWS_AS(cocycle_factor(BilinearForm::diagonal({2}), named_sl2("S"), pts[0]), Error);
}

TEST_CASE("cocycle condition on random pairs") {
  std::mt19937_64 rng(84);
  const BilinearForm b = BilinearForm(IntMatrix{{2, -1}, {-1, 2}});
  for (int i = 0; i < 50; ++i) {
    const Sl2 g1 = random_sl2(4, rng), g2 = random_sl2(4, rng);
    const JacobiPoint p = random_points(2, 1, rng)[0];
    CHECK(cocycle_residual(b, g1, g2, p) < 1e-9L);
  }
}

TEST_CASE("E8 transformation laws") {
  const BilinearForm e8 = builtin_form("E8");
  std::mt19937_64 rng(85);
  const auto pts = random_points(8, 3, rng);
  for (const char* name : {"S", "T"}) {
    const JacobiElement g = named_sl2(name);
    const JacobiEvaluator ev = evaluator_for(e8, pts, g, 1e-8L);
    const TransformationReport r = check_transformation(ev, g, pts, 1e-8L);
    CHECK(r.residuals.size() == pts.size());
    CHECK(r.passed());
    CHECK(r.max_residual < 1e-10L);
  }
}

TEST_CASE("lattice shifts") {
  const BilinearForm two = BilinearForm::diagonal({2});
  const std::vector<JacobiPoint> pts{{Complex(0, 1), {Complex(0.1L, 0.2L)}}};
  const JacobiElement g = LatticeShift{{1}, {0}};
  const JacobiEvaluator ev = evaluator_for(two, pts, g, 1e-10L);
  CHECK(check_transformation(ev, g, pts, 1e-10L).passed());

  std::mt19937_64 rng(86);
  const BilinearForm odd(IntMatrix{{1, 0}, {0, 3}});
  const auto more = random_points(2, 4, rng);
  const JacobiElement h = LatticeShift{{1, -1}, {2, 0}};
  const JacobiEvaluator ev2 = evaluator_for(odd, more, h, 1e-9L);
  CHECK(check_transformation(ev2, h, more, 1e-9L).passed());
  const JacobiElement period = LatticeShift{{0, 0}, {1, 1}};
  CHECK(check_transformation(ev2, period, more, 1e-9L).passed());
}

TEST_CASE("transformation preconditions") {
  const JacobiEvaluator two(BilinearForm::diagonal({2}), 3);
  const std::vector<JacobiPoint> pts{{Complex(0, 1), {Complex(0.1L)}}};
  CHECK_THROWS_AS(check_transformation(two, named_sl2("S"), pts, 1e-8L), Error);
  CHECK_NOTHROW(check_transformation(two, named_sl2("T"), pts, 1e-8L));
  const JacobiEvaluator odd(BilinearForm::diagonal({1}), 3);
  CHECK_THROWS_AS(check_transformation(odd, named_sl2("T"), pts, 1e-8L), Error);
}

TEST_CASE("tail bounds") {
  const BilinearForm b(IntMatrix{{2, 1}, {1, 2}});
  const JacobiPoint p{Complex(0.2L, 0.9L), {Complex(0.1L, 0.03L), Complex(0, -0.02L)}};
  long double last = 1e9L;
  for (double r : {1.0, 1.5, 2.0, 3.0, 4.0}) {
    const JacobiEvaluator ev(b, r);
    const long double t = ev.tail_bound(p);
    CHECK(t <= last);
    last = t;
  }
  const JacobiEvaluator small(b, 1);
  CHECK_THROWS_AS(small.theta_eval(p, 1e-30L), Error);
  const double r = JacobiEvaluator::required_cutoff(b, {p}, 1e-12L);
  CHECK(JacobiEvaluator(b, r).tail_bound(p) <= 1e-12L);
}

TEST_CASE("evaluator preconditions") {
  CHECK_THROWS_AS(JacobiEvaluator(BilinearForm::diagonal({2}), 0.5), Error);
  CHECK_THROWS_AS(JacobiEvaluator(BilinearForm::diagonal({2}), 2, 40), Error);
  const JacobiEvaluator indefinite(BilinearForm::hyperbolic(), 2);
  CHECK_THROWS_AS(indefinite.theta_eval({Complex(0, 1), {Complex(0), Complex(0)}}), Error);
  const JacobiEvaluator two(BilinearForm::diagonal({2}), 2);
  CHECK_THROWS_AS(two.theta_eval({Complex(0, 1), {Complex(0), Complex(0)}}), Error);
  CHECK_THROWS_AS(two.theta_eval({Complex(0, 0), {Complex(0)}}), Error);
}

TEST_CASE("random points stay in the sampling box") {
  std::mt19937_64 rng(87);
  for (const auto& p : random_points(3, 50, rng)) {
    CHECK(p.tau.imag() >= 0.8L);
    CHECK(p.tau.imag() <= 1.6L);
    CHECK(std::abs(p.tau.real()) <= 0.5L);
    for (const auto& zi : p.z) {
      CHECK(std::abs(zi.real()) <= 0.25L);
      CHECK(std::abs(zi.imag()) <= 0.05L);
    }
  }
}
