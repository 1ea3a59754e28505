#include "tate/encoding.hpp"
#include "tate/linalg.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace tate;

namespace {

GroupPtr cyclic(std::size_t n) { return make_group(FiniteGroup::cyclic(n)); }
GroupPtr s3() { return make_group(FiniteGroup::from_permutations({{1, 0, 2}, {1, 2, 0}})); }

void BM_SmithNormalForm(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> d(-9, 9);
  IntMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = d(rng);
  for (auto _ : st) benchmark::DoNotOptimize(smith_normal_form(a));
}
BENCHMARK(BM_SmithNormalForm)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

// Fresh context per iteration so the memo table does not hide the work.
void BM_BarCohomologyS3(benchmark::State& st) {
  const auto deg = static_cast<std::size_t>(st.range(0));
  auto g = s3();
  auto m = augmentation_ideal(g);
  for (auto _ : st) {
    TateContext ctx;
    benchmark::DoNotOptimize(ctx.bar_cohomology(m, deg));
  }
}
BENCHMARK(BM_BarCohomologyS3)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

void BM_ShiftedCohomologyS3(benchmark::State& st) {
  const auto deg = static_cast<std::size_t>(st.range(0));
  auto g = s3();
  auto m = augmentation_ideal(g);
  for (auto _ : st) {
    TateContext ctx;
    benchmark::DoNotOptimize(ctx.shifted_cohomology(m, deg));
  }
}
BENCHMARK(BM_ShiftedCohomologyS3)->DenseRange(1, 2)->Unit(benchmark::kMillisecond);

void BM_NegativeDegreeCup(benchmark::State& st) {
  auto g = cyclic(static_cast<std::size_t>(st.range(0)));
  TateContext ctx;
  auto z = ctx.trivial_z(g);
  auto ig = ctx.augmentation(g);
  auto [x, xp] = canonical_augmentation_elements(ctx, g);
  for (auto _ : st) benchmark::DoNotOptimize(verify_encoding_elements(ctx, ig, z, 1, x, xp));
}
BENCHMARK(BM_NegativeDegreeCup)->Arg(3)->Arg(6)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_FindEncoding(benchmark::State& st) {
  auto g = cyclic(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) {
    TateContext ctx;
    benchmark::DoNotOptimize(find_encoding_element(ctx, ctx.augmentation(g), ctx.trivial_z(g), 1));
  }
}
BENCHMARK(BM_FindEncoding)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_Resolution(benchmark::State& st) {
  auto g = cyclic(static_cast<std::size_t>(st.range(0)));
  const auto r = static_cast<std::size_t>(st.range(1));
  for (auto _ : st) {
    TateContext ctx;
    benchmark::DoNotOptimize(encoding_resolution(ctx, g, r));
  }
}
BENCHMARK(BM_Resolution)->Args({3, 3})->Args({6, 2})->Args({6, 3})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
