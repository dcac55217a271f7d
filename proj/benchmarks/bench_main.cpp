#include <benchmark/benchmark.h>

#include "fkdv/algebra.hpp"
#include "fkdv/classify.hpp"
#include "fkdv/expr.hpp"
#include "fkdv/reduce.hpp"
#include "fkdv/verify.hpp"

using namespace fkdv;

static void BM_ParseDifferentiate(benchmark::State& state) {
  for (auto _ : state) {
    const Expr e = parse("exp(sin(t))*tanh(t)/(2+cos(t)) + sqrt(1+t^2)");
    benchmark::DoNotOptimize(eval(differentiate(e, 5), 0.7));
  }
}
BENCHMARK(BM_ParseDifferentiate);

static void BM_ClassifyPower(benchmark::State& state) {
  const EquationSpec e = EquationSpec::make(2.0, Function(), Function(parse("3*(t+0.5)^1.7")), {1, 2});
  for (auto _ : state) benchmark::DoNotOptimize(classify(e).rho);
}
BENCHMARK(BM_ClassifyPower);

static void BM_ClassifyGauged(benchmark::State& state) {
  const EquationSpec e = EquationSpec::make(2.0, Function(parse("sin(t)+2")), Function(parse("t^2")), {1, 2});
  for (auto _ : state) benchmark::DoNotOptimize(classify(e).kind);
}
BENCHMARK(BM_ClassifyGauged);

static void BM_StructureConstants(benchmark::State& state) {
  const EquationSpec e = EquationSpec::make(2.0, Function(), Function(1.0), {1, 2});
  const ClassificationResult c = classify(e);
  const auto basis = symmetry_basis(c, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(identify_algebra(structure_constants(basis)).label);
}
BENCHMARK(BM_StructureConstants);

static void BM_IntegrateReduced(benchmark::State& state) {
  ReducedODE ode;
  ode.n = 2.0;
  ode.epsilon = -1.0;
  ode.c0 = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(integrate_reduced(ode, {0.1, 0.0, 0.0, 0.0, 0.0}, 0.0, 5.0).steps());
}
BENCHMARK(BM_IntegrateReduced);

static void BM_ResidualGrid(benchmark::State& state) {
  const auto entries = exact_catalog(2.0, -1, Function(), {0, 1});
  const Grid g{{0, 1}, {-5, 5}, 40, 40};
  for (auto _ : state) benchmark::DoNotOptimize(pde_residual(entries.at(1).field, entries.at(1).equation, g).max_rel);
}
BENCHMARK(BM_ResidualGrid);
BENCHMARK_MAIN();
