#include <benchmark/benchmark.h>

#include "turingrad/glground.hpp"

namespace {

void BM_SolveCanonical(benchmark::State& state) {
  turingrad::GLConfig cfg;
  cfg.m = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(turingrad::solve_canonical(1.5, cfg));
}
BENCHMARK(BM_SolveCanonical)->Arg(5001)->Arg(20001)->Arg(40001)->Unit(benchmark::kMillisecond);

}  // namespace
