#include <random>

#include <benchmark/benchmark.h>

#include "mdim/covering.hpp"
#include "mdim/construction.hpp"
#include "mdim/shift_space.hpp"
#include "mdim/waist.hpp"

using namespace mdim;

namespace {

FiniteMetricSpace random_space(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coord(0, 16);
  std::vector<DyadicVec> pts(n);
  for (auto& p : pts) p = DyadicVec({Dyadic(BigInt(coord(rng)), 4), Dyadic(BigInt(coord(rng)), 4)});
  return FiniteMetricSpace::from_points(pts, [](const DyadicVec& x, const DyadicVec& y) {
    return linf_dist(x, y).to_rational();
  });
}

void BM_CoverExact(benchmark::State& state) {
  const auto space = random_space(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(cover_number_exact(space, Rational(1, 4)));
}
BENCHMARK(BM_CoverExact)->Arg(9)->Arg(16)->Arg(24);

void BM_CoverGreedy(benchmark::State& state) {
  const auto space = random_space(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(cover_number_greedy(space, Rational(1, 4)));
}
BENCHMARK(BM_CoverGreedy)->Arg(24)->Arg(128);

void BM_MetricDN(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> coord(0, 8);
  const auto word = [&] {
    std::vector<DyadicVec> s(32);
    for (auto& v : s) v = DyadicVec({Dyadic(BigInt(coord(rng)), 3), Dyadic(BigInt(coord(rng)), 3)});
    return LatticeWord::periodic(2, 0, s);
  };
  const auto x = word();
  const auto y = word();
  const auto N = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(metric_dN(x, y, N, 8));
}
BENCHMARK(BM_MetricDN)->Arg(1)->Arg(8)->Arg(32);

void BM_WaistMeasure(benchmark::State& state) {
  const GridMap f = builtin_map("saddle", static_cast<unsigned>(state.range(0)));
  const std::vector<Dyadic> rs{Dyadic(1, 3), Dyadic(1, 2), Dyadic(3, 3)};
  for (auto _ : state) benchmark::DoNotOptimize(waist_check_measure(f, rs, 1));
}
BENCHMARK(BM_WaistMeasure)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_Construction(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(build_construction(1, Rational(1, 2), 3));
}
BENCHMARK(BM_Construction)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
