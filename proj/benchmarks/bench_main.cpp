#include <benchmark/benchmark.h>

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "maslov/harness.hpp"
#include "maslov/rng.hpp"
#include "maslov/spinor.hpp"
#include "maslov/stratification.hpp"
#include "maslov/symplectic.hpp"

namespace m = maslov;

static void BM_ChartRoundTrip(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const m::SymplecticSpace space(n);
  const m::Chart chart = m::chart_over_q(space);
  m::Rng rng(1);
  const m::SymmetricForm b(rng.gaussian_symmetric(n));
  const m::LagrangianFrame l = m::graph_over_q(space, b);
  for (auto _ : state) {
    benchmark::DoNotOptimize(m::chart_coords(l, chart));
  }
}
BENCHMARK(BM_ChartRoundTrip)->Arg(2)->Arg(4)->Arg(8);

static void BM_IntersectionDim(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const m::SymplecticSpace space(n);
  const m::LagrangianFrame l1 = m::random_lagrangian(space, 11);
  const m::LagrangianFrame l2 = m::random_lagrangian(space, 12);
  for (auto _ : state) {
    benchmark::DoNotOptimize(m::intersection_dim(l1, l2));
  }
}
BENCHMARK(BM_IntersectionDim)->Arg(2)->Arg(4)->Arg(8);

static void BM_MinorTest(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const m::SymmetricForm a = m::random_symmetric_with_nullity(n, 2, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(m::minor_test(a, 2));
  }
}
BENCHMARK(BM_MinorTest)->Arg(4)->Arg(6);

static void BM_MaslovIndexLoop(benchmark::State& state) {
  const m::SymplecticSpace space(2);
  const m::GrassmannPath loop = m::unitary_loop(space, 7, {1, -2}, 64);
  const m::LagrangianFrame l0 = m::l0_frame(space);
  for (auto _ : state) {
    benchmark::DoNotOptimize(m::maslov_index(loop, l0).index);
  }
}
BENCHMARK(BM_MaslovIndexLoop);

static void BM_WindingOracle(benchmark::State& state) {
  const m::SymplecticSpace space(2);
  const m::GrassmannPath loop = m::unitary_loop(space, 7, {1, -2}, 64);
  for (auto _ : state) {
    benchmark::DoNotOptimize(m::winding_oracle(loop));
  }
}
BENCHMARK(BM_WindingOracle);

static void BM_FresnelClosedForm(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  m::Rng rng(2);
  Eigen::MatrixXd raw = rng.gaussian_symmetric(n);
  raw += (raw.cwiseAbs().maxCoeff() + 1.0) * Eigen::MatrixXd::Identity(n, n);
  const m::SymmetricForm a(raw);
  for (auto _ : state) {
    benchmark::DoNotOptimize(m::fresnel_gaussian(a).value);
  }
}
BENCHMARK(BM_FresnelClosedForm)->Arg(2)->Arg(6);

static void BM_AnnulusDeterministic(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(m::annulus_integral(2, 0.5, 1.0).value);
  }
}
BENCHMARK(BM_AnnulusDeterministic);

static void BM_AnnulusMonteCarlo(benchmark::State& state) {
  m::EstimatorConfig cfg;
  cfg.samples_n3 = static_cast<long>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(m::annulus_integral(3, 0.5, 1.0, cfg).value);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AnnulusMonteCarlo)->Arg(32000)->Arg(128000);

BENCHMARK_MAIN();
