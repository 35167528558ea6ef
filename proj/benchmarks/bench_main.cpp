#include <benchmark/benchmark.h>

#include <random>

#include "quadtmf/discform.hpp"
#include "quadtmf/invariants.hpp"
#include "quadtmf/lattice_enum.hpp"
#include "quadtmf/theta.hpp"

using namespace quadtmf;

namespace {

IntMatrix random_matrix(std::size_t n, long bound, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> pick(-bound, bound);
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) m(i, j) = m(j, i) = pick(rng);
  return m;
}

void smith(benchmark::State& state) {
  const IntMatrix m = random_matrix(static_cast<std::size_t>(state.range(0)), 50, 1);
  for (auto _ : state) benchmark::DoNotOptimize(smith_normal_form(m));
}
BENCHMARK(smith)->Arg(4)->Arg(8)->Arg(16);

void discriminant_form(benchmark::State& state) {
  const BilinearForm b(random_matrix(static_cast<std::size_t>(state.range(0)), 5, 2));
  for (auto _ : state) benchmark::DoNotOptimize(discriminant(b));
}
BENCHMARK(discriminant_form)->Arg(3)->Arg(6);

void enumerate_e8(benchmark::State& state) {
  const ShortVectorEnumerator e(builtin_form("E8"));
  for (auto _ : state) benchmark::DoNotOptimize(e.norm_counts(state.range(0)));
}
BENCHMARK(enumerate_e8)->Arg(6)->Arg(10);

void theta_d16(benchmark::State& state) {
  const BilinearForm& b = builtin_form("D16+");
  for (auto _ : state) benchmark::DoNotOptimize(theta_series(b, state.range(0)));
}
BENCHMARK(theta_d16)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void z3_lens(benchmark::State& state) {
  const ThreeManifoldPresentation m{FramedLink::from_gram(BilinearForm(random_matrix(4, 4, 3))), "random"};
  for (auto _ : state) benchmark::DoNotOptimize(z3(m));
}
BENCHMARK(z3_lens);

}  // namespace
BENCHMARK_MAIN();
