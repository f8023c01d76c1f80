#include <benchmark/benchmark.h>

#include "turingrad/besseln.hpp"

namespace {

void BM_Jn(benchmark::State& state) {
  const double n = static_cast<double>(state.range(0)) / 2.0;
  double r = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(turingrad::jn(n, 1, r));
    r = r < 50.0 ? r + 0.37 : 0.1;
  }
}
BENCHMARK(BM_Jn)->DenseRange(1, 7, 2);

void BM_BesselOperator(benchmark::State& state) {
  turingrad::SampledRadial f;
  f.r0 = 0.5;
  f.h = 0.01;
  for (int i = 0; i < state.range(0); ++i) f.values.push_back(turingrad::jn(1.5, 0, f.r(i)));
  for (auto _ : state) benchmark::DoNotOptimize(turingrad::bessel_operator_apply(1.5, f));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BesselOperator)->Range(1 << 10, 1 << 16);

}  // namespace
