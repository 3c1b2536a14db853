#include <benchmark/benchmark.h>

#include <fuzzydyn/comparison.hpp>
#include <fuzzydyn/experiments.hpp>
#include <fuzzydyn/ivp.hpp>
#include <fuzzydyn/lyapunov.hpp>

using namespace fuzzydyn;

namespace {

void BM_SolveBoundedGrowth(benchmark::State& state) {
  Scenario scn = example_3_1_scenario();
  scn.ivp.horizon = static_cast<double>(state.range(0));
  for (auto _ : state) {
    auto traj = solve(scn.ivp);
    benchmark::DoNotOptimize(traj);
  }
}
BENCHMARK(BM_SolveBoundedGrowth)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_MaximalSolution(benchmark::State& state) {
  const ScalarIvp ivp{ScalarFn::parse_or_throw("w/(1+t^2)"), 0.0, 1.0, 20.0, 0.05};
  for (auto _ : state) {
    auto run = maximal_solution(ivp);
    benchmark::DoNotOptimize(run);
  }
}
BENCHMARK(BM_MaximalSolution)->Unit(benchmark::kMillisecond);

void BM_DiniUpper(benchmark::State& state) {
  const Scenario scn = example_3_1_scenario();
  const HSchedule sched = HSchedule::geometric();
  const FuzzyBox x = scale(0.5, scn.ivp.x0);
  for (auto _ : state) {
    const double d = dini_upper(scn.spec, scn.ivp.rhs, 1.0, x, sched);
    benchmark::DoNotOptimize(d);
  }
}
BENCHMARK(BM_DiniUpper);

void BM_CheckUniformStability(benchmark::State& state) {
  const Scenario scn = example_3_1_scenario();
  const auto plan = SamplingPlan::make_default(scn.ivp.x0.grid(), 1, scn.spec.rho,
                                               SamplingPlan::Shapes::Mixed);
  for (auto _ : state) {
    auto cert = check_theorem(scn.spec, scn.ivp.rhs, TheoremId::T3_2, plan);
    benchmark::DoNotOptimize(cert);
  }
}
BENCHMARK(BM_CheckUniformStability)->Unit(benchmark::kMillisecond);

}  // namespace
