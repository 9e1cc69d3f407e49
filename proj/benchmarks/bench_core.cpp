#include <benchmark/benchmark.h>

#include "cono/bandit.hpp"
#include "cono/full_info.hpp"
#include "cono/geometry.hpp"
#include "cono/instances.hpp"
#include "cono/oracle.hpp"
#include "cono/rng.hpp"

namespace {

using namespace cono;

void BM_ProjectSimplex(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  Rng rng(1);
  Vector x(d);
  for (int i = 0; i < d; ++i) x[i] = rng.uniform(-1, 2);
  for (auto _ : state) benchmark::DoNotOptimize(project_simplex(x));
}
BENCHMARK(BM_ProjectSimplex)->Arg(4)->Arg(64)->Arg(1024);

void BM_ReciprocalSumSolver(benchmark::State& state) {
  const int K = static_cast<int>(state.range(0));
  Rng rng(2);
  Vector L(K);
  for (int i = 0; i < K; ++i) L[i] = rng.uniform(0, 100);
  for (auto _ : state) benchmark::DoNotOptimize(ftrl_update(L, 0.3));
}
BENCHMARK(BM_ReciprocalSumSolver)->Arg(2)->Arg(16)->Arg(256);

void BM_FractionalKnapsack(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  Rng rng(3);
  Vector c(d), b(d);
  for (int i = 0; i < d; ++i) {
    c[i] = rng.uniform(-1, 1);
    b[i] = rng.uniform();
  }
  const Vector lo = Vector::Zero(d);
  const Vector hi = Vector::Ones(d);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fractional_knapsack(c, b, 0.25 * d, lo, hi));
  }
}
BENCHMARK(BM_FractionalKnapsack)->Arg(8)->Arg(512);

void BM_FullInfoRun(benchmark::State& state) {
  const int T = static_cast<int>(state.range(0));
  const auto trace = gen_linear(2, T, default_budget(T), 1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(run_full_info(trace));
  state.SetItemsProcessed(state.iterations() * T);
}
BENCHMARK(BM_FullInfoRun)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_BanditRun(benchmark::State& state) {
  const int K = static_cast<int>(state.range(0));
  const int T = 10000;
  const auto trace = gen_stochastic_bandit(K, T, default_budget(T), 1);
  for (auto _ : state) benchmark::DoNotOptimize(run_bandit(trace, 1));
  state.SetItemsProcessed(state.iterations() * T);
}
BENCHMARK(BM_BanditRun)->Arg(2)->Arg(5)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
