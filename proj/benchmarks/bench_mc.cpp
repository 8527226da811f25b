#include <benchmark/benchmark.h>

#include "ovkron/mc.hpp"

using namespace ovkron;

namespace {

ChannelModel trivial() {
  ModelSpec s;
  s.n_r = 1;
  s.n_t = 1;
  s.r2 = {ScalarMeasure::dirac(1.0)};
  s.t2 = {ScalarMeasure::dirac(1.0)};
  s.entry_variances = RealMatrix::Ones(1, 1);
  return build_model(s);
}

void BM_SampleChannel(benchmark::State& state) {
  McConfig cfg;
  cfg.model = trivial();
  cfg.block_size = state.range(0);
  cfg.trials = 1;
  for (auto _ : state) {
    cfg.seed += 1;
    benchmark::DoNotOptimize(sample_channel(cfg));
  }
}
BENCHMARK(BM_SampleChannel)->Arg(128)->Arg(512);

void BM_TrialSpectrum(benchmark::State& state) {
  McConfig cfg;
  cfg.model = trivial();
  cfg.block_size = state.range(0);
  cfg.trials = 1;
  auto samples = sample_channel(cfg);
  for (auto _ : state) {
    benchmark::DoNotOptimize(trial_eigenvalues(samples));
  }
}
BENCHMARK(BM_TrialSpectrum)->Arg(128)->Arg(512);

}  // namespace

BENCHMARK_MAIN();
