#include <benchmark/benchmark.h>

#include "ovkron/subordination.hpp"

using namespace ovkron;

namespace {

MatrixCauchyMap q4() {
  ScalarMeasure r2 = ScalarMeasure::from_atoms({{0.5, 0.5}, {1.5, 0.5}});
  ScalarMeasure t2 = ScalarMeasure::from_atoms({{0.75, 0.5}, {1.25, 0.5}});
  return correlation_corner_map({r2, r2}, {t2, t2});
}

MatrixCauchyMap xhat4() {
  MatrixCauchyMap x1 =
      circular_block_map(RealVector::Ones(2), identity_permutation(2));
  MatrixCauchyMap x2 = circular_block_map(RealVector::Ones(2), {1, 0});
  FixedPointConfig cfg;
  return free_additive_convolution(x1, x2, cfg);
}

void BM_AdditiveFold(benchmark::State& state) {
  MatrixCauchyMap xh = xhat4();
  double eta = 1.0 / static_cast<double>(state.range(0));
  ComplexVector j = ComplexVector::Constant(4, Complex(1.3, eta));
  EvalContext ctx;
  for (auto _ : state) {
    benchmark::DoNotOptimize(xh.eval_diag(j, &ctx));
  }
}
BENCHMARK(BM_AdditiveFold)->Arg(10)->Arg(100)->Arg(1000);

void BM_MultiplicativeSolve(benchmark::State& state) {
  MatrixCauchyMap q = q4();
  MatrixCauchyMap xh = xhat4();
  FixedPointConfig cfg;
  double eta = 1.0 / static_cast<double>(state.range(0));
  Complex w = std::sqrt(Complex(1.5, eta));
  EvalContext ctx;
  ComplexVector warm;
  const ComplexVector* w0 = nullptr;
  for (auto _ : state) {
    auto res = multiplicative_subordinator_diag(q, xh, w, cfg, &ctx, w0);
    warm = res.omega2;
    w0 = &warm;
    benchmark::DoNotOptimize(res.g);
  }
}
BENCHMARK(BM_MultiplicativeSolve)->Arg(10)->Arg(100)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
