#include <benchmark/benchmark.h>

#include "steinchaos/chaos_algebra.hpp"
#include "steinchaos/dist_metrics.hpp"
#include "steinchaos/gauss_core.hpp"
#include "steinchaos/hida_bound.hpp"
#include "steinchaos/indep_sums.hpp"
#include "steinchaos/quadrature.hpp"
#include "steinchaos/random_stream.hpp"
#include "steinchaos/stein_eq.hpp"

using namespace steinchaos;

static void BM_PhiloxNormal(benchmark::State& state) {
  const RandomStream stream(1);
  std::uint64_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(stream.normal(i++));
}
BENCHMARK(BM_PhiloxNormal);

static void BM_HermiteFunctions(benchmark::State& state) {
  const HermiteBasis basis(static_cast<std::size_t>(state.range(0)));
  double t = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(basis.evaluate_all(t));
    t += 1e-6;
  }
}
BENCHMARK(BM_HermiteFunctions)->Arg(16)->Arg(64);

static void BM_GaussHermiteNodes(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(gauss_hermite_nodes(static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_GaussHermiteNodes)->Arg(32)->Arg(128);

static void BM_SteinSolutionQuadrature(benchmark::State& state) {
  const SteinSolution sol(builtin_test_functions("lipschitz")[1]);
  double w = -3.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sol.f(w));
    w = w > 3.0 ? -3.0 : w + 0.01;
  }
}
BENCHMARK(BM_SteinSolutionQuadrature);

static void BM_ChaosMultiply(benchmark::State& state) {
  ChaosFunctional phi;
  for (std::uint32_t j = 0; j < 6; ++j) {
    phi.add_term(MultiIndex::unit(j, 2), 0.3 + 0.1 * j);
    phi.add_term(MultiIndex{{j, 1}, {j + 1, 2}}, 0.2);
  }
  for (auto _ : state) benchmark::DoNotOptimize(multiply(phi, phi));
}
BENCHMARK(BM_ChaosMultiply);

static void BM_Wasserstein(benchmark::State& state) {
  SampleSet s(sample_std_normal(RandomStream(3), static_cast<std::size_t>(state.range(0))));
  s.sort();
  for (auto _ : state) benchmark::DoNotOptimize(wasserstein_to_normal(s));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Wasserstein)->Arg(10000)->Arg(1000000);

static void BM_SimulateChi2Sum(benchmark::State& state) {
  const auto model = IndepSumModel::chi2(10);
  for (auto _ : state) benchmark::DoNotOptimize(simulate_sum(model, RandomStream(4), 100000, 1));
}
BENCHMARK(BM_SimulateChi2Sum);

static void BM_CarreQuadrature(benchmark::State& state) {
  const auto phi = (ChaosFunctional::basis(MultiIndex::unit(0, 2)) + ChaosFunctional::basis(MultiIndex::unit(1, 2)))
                       .scaled(1.0 / std::sqrt(2.0));
  const auto gamma = carre_functional(phi);
  for (auto _ : state) benchmark::DoNotOptimize(e_abs_dev_quadrature(gamma));
}
BENCHMARK(BM_CarreQuadrature);
BENCHMARK_MAIN();
