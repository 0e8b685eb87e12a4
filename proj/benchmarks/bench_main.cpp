#include <benchmark/benchmark.h>

#include "sympcoh/applications.hpp"
#include "sympcoh/coherence.hpp"
#include "sympcoh/ensembles.hpp"
#include "sympcoh/symplectic_ops.hpp"

namespace {

using namespace sympcoh;

CovMat bench_state(int m) {
  Rng rng = stream(1, static_cast<std::uint64_t>(m));
  return sample_pure(EnsembleKind::kUnitary, 4.0 * m, m, rng).cov;
}

void BM_Validate(benchmark::State& state) {
  const Matrix v = bench_state(static_cast<int>(state.range(0))).matrix();
  for (auto _ : state) benchmark::DoNotOptimize(validate(v));
}
BENCHMARK(BM_Validate)->Arg(1)->Arg(4)->Arg(16)->Arg(64);

void BM_SymplecticEigenvalues(benchmark::State& state) {
  const CovMat cov = bench_state(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(symplectic_eigenvalues(cov));
}
BENCHMARK(BM_SymplecticEigenvalues)->Arg(1)->Arg(4)->Arg(16)->Arg(64);

void BM_HaarOrthogonal(benchmark::State& state) {
  Rng rng = stream(2, 0);
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(haar_orthogonal(m, rng));
}
BENCHMARK(BM_HaarOrthogonal)->Arg(2)->Arg(8)->Arg(32);

void BM_EnsembleNuSq(benchmark::State& state) {
  const EnsembleConfig cfg{static_cast<int>(state.range(0)), 4.0 * state.range(0), 1000, 3, EnsembleKind::kUnitary};
  for (auto _ : state) benchmark::DoNotOptimize(ensemble_nu_sq(cfg));
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_EnsembleNuSq)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_Discrimination(benchmark::State& state) {
  DiscriminationConfig cfg{msc_canonical(6.0, 1), {LossSpec{0.4}, LossSpec{0.8}}};
  cfg.trials = 50;
  cfg.n_samples = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_discrimination(cfg));
}
BENCHMARK(BM_Discrimination)->Arg(1000)->Arg(8000)->Unit(benchmark::kMillisecond);

}  // namespace
