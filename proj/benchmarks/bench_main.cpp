#include <benchmark/benchmark.h>

#include <array>
#include <random>
#include <vector>

#include "schrodk/box_union.hpp"
#include "schrodk/counterexample.hpp"
#include "schrodk/expsum.hpp"
#include "schrodk/orbit_table.hpp"

using namespace schrodk;

static void BM_SumTable(benchmark::State& state) {
  const auto q = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(SumTable::build(3, q));
}
BENCHMARK(BM_SumTable)->Arg(101)->Arg(499)->Arg(2039);

static void BM_OrbitTable(benchmark::State& state) {
  const auto q = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(OrbitTable::build(3, q));
}
BENCHMARK(BM_OrbitTable)->Arg(101)->Arg(499)->Arg(2039);

// Whole table by direct complete_sum calls, the O(q^3) reference.
static void BM_NaiveTable(benchmark::State& state) {
  const auto q = static_cast<std::uint64_t>(state.range(0));
  const auto pattern = ExponentPattern::top_linear(3);
  for (auto _ : state) {
    double acc = 0.0;
    for (std::uint64_t a1 = 1; a1 < q; ++a1) {
      for (std::uint64_t b = 0; b < q; ++b) {
        const std::array<std::uint64_t, 2> c{a1, b};
        acc += std::abs(complete_sum(pattern, c, q));
      }
    }
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_NaiveTable)->Arg(101)->Arg(211);

static void BM_OneDimSum(benchmark::State& state) {
  const double rho = static_cast<double>(state.range(0));
  const Phase y = Phase::rational(7, 2039);
  const Phase w = Phase::rational(5, 2039);
  for (auto _ : state) benchmark::DoNotOptimize(one_dim_sum(2 * rho, y, w, rho, 3));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_OneDimSum)->Arg(8192)->Arg(65536);

static void BM_UnionArea(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Rect> rects(static_cast<std::size_t>(state.range(0)));
  for (auto& r : rects) {
    const double x = u(rng), y = u(rng);
    r = {x, x + 0.01, y, y + 0.01};
  }
  for (auto _ : state) benchmark::DoNotOptimize(union_area(rects));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_UnionArea)->Arg(1000)->Arg(20000);
BENCHMARK_MAIN();
