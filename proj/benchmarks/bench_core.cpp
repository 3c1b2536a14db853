#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include <fuzzydyn/box.hpp>
#include <fuzzydyn/expr.hpp>

using namespace fuzzydyn;

namespace {

std::vector<FuzzyBox> random_states(std::size_t count, std::size_t dim) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> center(-50.0, 50.0);
  std::uniform_real_distribution<double> width(0.0, 20.0);
  const LevelGrid grid = LevelGrid::uniform();
  std::vector<FuzzyBox> out;
  out.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    std::vector<Box> cuts;
    std::vector<double> lo0(dim), hi0(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      const double c = center(rng);
      lo0[i] = c - width(rng);
      hi0[i] = c + width(rng);
    }
    for (std::size_t j = 0; j < grid.size(); ++j) {
      std::vector<double> lo(dim), hi(dim);
      const double shrink = grid.alpha(j) * 0.5;
      for (std::size_t i = 0; i < dim; ++i) {
        const double mid = 0.5 * (lo0[i] + hi0[i]);
        lo[i] = lo0[i] + shrink * (mid - lo0[i]);
        hi[i] = hi0[i] - shrink * (hi0[i] - mid);
      }
      cuts.emplace_back(std::move(lo), std::move(hi));
    }
    out.emplace_back(grid, std::move(cuts));
  }
  return out;
}

void BM_SupMetric(benchmark::State& state) {
  const auto states = random_states(64, static_cast<std::size_t>(state.range(0)));
  std::size_t k = 0;
  for (auto _ : state) {
    const double d = sup_metric(states[k % 64], states[(k + 1) % 64]);
    benchmark::DoNotOptimize(d);
    ++k;
  }
}
BENCHMARK(BM_SupMetric)->Arg(1)->Arg(3)->Arg(8);

void BM_MinkowskiAdd(benchmark::State& state) {
  const auto states = random_states(64, static_cast<std::size_t>(state.range(0)));
  std::size_t k = 0;
  for (auto _ : state) {
    const FuzzyBox sum = add(states[k % 64], states[(k + 1) % 64]);
    benchmark::DoNotOptimize(sum);
    ++k;
  }
}
BENCHMARK(BM_MinkowskiAdd)->Arg(1)->Arg(8);

void BM_HDifferenceRoundTrip(benchmark::State& state) {
  const auto states = random_states(64, 3);
  std::size_t k = 0;
  for (auto _ : state) {
    const FuzzyBox x = add(states[k % 64], states[(k + 1) % 64]);
    auto z = h_difference(x, states[k % 64]);
    benchmark::DoNotOptimize(z);
    ++k;
  }
}
BENCHMARK(BM_HDifferenceRoundTrip);

void BM_ExprEval(benchmark::State& state) {
  const ScalarFn fn = ScalarFn::parse_or_throw("w/(1+t^2) + sin(t)*exp(-w^2/10)");
  double t = 0.0;
  for (auto _ : state) {
    const auto v = fn.eval(t, 1.5);
    benchmark::DoNotOptimize(v);
    t += 1e-3;
  }
}
BENCHMARK(BM_ExprEval);

}  // namespace
