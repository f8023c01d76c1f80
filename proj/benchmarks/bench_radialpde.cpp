#include <benchmark/benchmark.h>

#include "turingrad/radialpde.hpp"

namespace {

using namespace turingrad;

void BM_Jacobian(benchmark::State& state) {
  const RDSystem sys = sh_as_rd(1.6);
  const auto disc = make_discretization(1.0, 200.0, static_cast<int>(state.range(0)));
  const Eigen::VectorXd u = seed_state(PatternKind::SpotA, turing_data(sys), disc, 1e-2);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_jacobian(u, 1e-2, sys, disc));
}
BENCHMARK(BM_Jacobian)->Range(1 << 10, 1 << 14);

void BM_NewtonSpotA(benchmark::State& state) {
  const RDSystem sys = sh_as_rd(1.6);
  const double mu = 5e-3;
  const auto disc = discretization_for_spacing(1.0, 120.0, 0.1);
  const Eigen::VectorXd seed = seed_state(PatternKind::SpotA, turing_data(sys), disc, mu);
  for (auto _ : state) benchmark::DoNotOptimize(newton_solve(seed, mu, sys, disc));
}
BENCHMARK(BM_NewtonSpotA)->Unit(benchmark::kMillisecond);

void BM_ContinuePastFold(benchmark::State& state) {
  const RDSystem sys = sh_as_rd(1.6);
  const auto disc = discretization_for_spacing(1.0, 200.0, 0.1);
  const Eigen::VectorXd seed = seed_state(PatternKind::SpotA, turing_data(sys), disc, 1e-2);
  ContinuationConfig cfg;
  cfg.max_folds = 1;
  cfg.keep_solutions = false;
  for (auto _ : state) benchmark::DoNotOptimize(continue_branch(seed, 1e-2, sys, disc, cfg));
}
BENCHMARK(BM_ContinuePastFold)->Unit(benchmark::kMillisecond);

}  // namespace
