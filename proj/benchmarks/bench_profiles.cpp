#include <benchmark/benchmark.h>

#include "sslab/profiles.hpp"

namespace {

void BM_ShootKappa(benchmark::State& state) {
  const sslab::ProblemParams P{static_cast<int>(state.range(0)), 3.0};
  for (auto _ : state) benchmark::DoNotOptimize(sslab::shoot(sslab::kappa(3.0), P).residual);
}
BENCHMARK(BM_ShootKappa)->Arg(1)->Arg(3)->Arg(11)->Unit(benchmark::kMillisecond);

void BM_ShootEvent(benchmark::State& state) {
  const sslab::ProblemParams P{3, 2.0};
  for (auto _ : state) benchmark::DoNotOptimize(sslab::shoot(2.0, P).end_radius);
}
BENCHMARK(BM_ShootEvent)->Unit(benchmark::kMillisecond);

void BM_Scan(benchmark::State& state) {
  const sslab::ProblemParams P{11, 5.0};
  sslab::ScanOptions opt;
  opt.threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(sslab::scan_profiles(P, 0.0, 3.0 * sslab::kappa(5.0), 32, opt).brackets.size());
}
BENCHMARK(BM_Scan)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace
