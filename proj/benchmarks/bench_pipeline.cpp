#include <benchmark/benchmark.h>

#include "ovkron/channel.hpp"

using namespace ovkron;

namespace {

ChannelModel symmetric2x2(int atoms) {
  ModelSpec s;
  s.n_r = 2;
  s.n_t = 2;
  ScalarMeasure u = discretize_uniform01(atoms);
  s.r2 = {u, u};
  s.t2 = {u, u};
  CovarianceBlock b1{1.0, RealVector::Ones(2), identity_permutation(2)};
  CovarianceBlock b2{1.0, RealVector::Ones(2), {1, 0}};
  s.blocks = std::vector<CovarianceBlock>{b1, b2};
  return build_model(s);
}

void BM_ScalarTransformPoint(benchmark::State& state) {
  ChannelModel m = symmetric2x2(static_cast<int>(state.range(0)));
  PipelineConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        scalar_cauchy_hhstar(m, Complex(1.7, 1e-4), cfg));
  }
}
BENCHMARK(BM_ScalarTransformPoint)->Arg(8)->Arg(64);

void BM_DensityGrid(benchmark::State& state) {
  ChannelModel m = symmetric2x2(16);
  PipelineConfig cfg;
  cfg.jobs = 2;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        spectral_density(m, 6.0, static_cast<int>(state.range(0)), 1e-4, cfg));
  }
}
BENCHMARK(BM_DensityGrid)->Arg(64)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
