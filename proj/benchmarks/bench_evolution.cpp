#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "sslab/evolution.hpp"
#include "sslab/physical.hpp"

namespace {

void BM_RescaledStep(benchmark::State& state) {
  const int cells = static_cast<int>(state.range(0));
  auto st = sslab::make_rescaled_state(sslab::ProblemParams{1, 2.0}, 8.0, cells,
                                       [](double y) { return 1.0 + 0.1 * std::exp(-y * y); }, 1000000);
  for (auto _ : state) {
    sslab::step_rescaled(st, 1e-4);
    benchmark::DoNotOptimize(st.w.data());
  }
  state.SetComplexityN(cells);
}
BENCHMARK(BM_RescaledStep)->RangeMultiplier(2)->Range(400, 6400)->Complexity(benchmark::oN);

void BM_BlowupRun(benchmark::State& state) {
  sslab::BlowupOptions o;
  o.dt_factor = 0.05;
  const sslab::PhysicalDomain D{1, 2.0, static_cast<int>(state.range(0))};
  for (auto _ : state) {
    const auto run = sslab::solve_physical([](double x) { return 3.0 * std::cos(std::numbers::pi * x / 4.0); }, D,
                                           sslab::ProblemParams{1, 2.0}, o);
    benchmark::DoNotOptimize(run.t);
  }
}
BENCHMARK(BM_BlowupRun)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

}  // namespace
