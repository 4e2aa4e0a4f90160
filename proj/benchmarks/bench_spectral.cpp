#include <benchmark/benchmark.h>

#include "sslab/spectral.hpp"

namespace {

void BM_AssembleAndSolve1D(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const auto basis = sslab::build_basis(1, N);
  const auto w = sslab::sample(basis.grid, sslab::AnalyticField::constant(sslab::kappa(3.0)));
  for (auto _ : state) {
    const auto op = sslab::assemble(w, basis, sslab::ProblemParams{1, 3.0});
    benchmark::DoNotOptimize(sslab::spectrum(op, 4).eigenvalues.data());
  }
}
BENCHMARK(BM_AssembleAndSolve1D)->Arg(16)->Arg(32)->Arg(64);

void BM_AssembleAndSolve2D(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const auto basis = sslab::build_basis(2, N);
  const auto w = sslab::sample(basis.grid, sslab::AnalyticField::constant(sslab::kappa(3.0)));
  for (auto _ : state) {
    const auto op = sslab::assemble(w, basis, sslab::ProblemParams{2, 3.0});
    benchmark::DoNotOptimize(sslab::spectrum(op, 4).eigenvalues.data());
  }
}
BENCHMARK(BM_AssembleAndSolve2D)->Arg(64)->Arg(144)->Unit(benchmark::kMillisecond);

void BM_Rayleigh(benchmark::State& state) {
  const auto basis = sslab::build_basis(1, 32);
  const auto w = sslab::sample(basis.grid, sslab::AnalyticField::constant(sslab::kappa(2.0)));
  const auto op = sslab::assemble(w, basis, sslab::ProblemParams{1, 2.0});
  for (auto _ : state) benchmark::DoNotOptimize(sslab::first_eigenvalue_rayleigh(op));
}
BENCHMARK(BM_Rayleigh);

}  // namespace
