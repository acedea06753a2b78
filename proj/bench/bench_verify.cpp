// Serial reference kernels against their OpenMP versions.

#include <benchmark/benchmark.h>

#include "cmsym/algebra.hpp"
#include "cmsym/checks.hpp"
#include "cmsym/dynamics.hpp"

using namespace cmsym;

namespace {

CheckConfig verify_config(bool parallel) {
  CheckConfig cfg;
  cfg.samples = 8;
  cfg.parallel = parallel;
  return cfg;
}

void BM_TablePointwise(benchmark::State& state, bool parallel) {
  const int N = static_cast<int>(state.range(0));
  BracketTable t = build_table(N, Model::discrete);
  CheckConfig cfg = verify_config(parallel);
  for (auto _ : state) benchmark::DoNotOptimize(check_table_pointwise(t, cfg));
}

void BM_BuildTable(benchmark::State& state, bool parallel) {
  const int N = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(parallel ? build_table(N, Model::discrete) : build_table_serial(N, Model::discrete));
  }
}

void BM_LimitScan(benchmark::State& state, bool parallel) {
  auto grid = default_s_grid();
  for (auto _ : state) {
    benchmark::DoNotOptimize(parallel ? continuum_limit_scan(Rational(1, 2), grid, 1)
                                      : continuum_limit_scan_serial(Rational(1, 2), grid, 1));
  }
}

}  // namespace

BENCHMARK_CAPTURE(BM_TablePointwise, serial, false)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_TablePointwise, parallel, true)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_BuildTable, serial, false)->DenseRange(3, 5)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_BuildTable, parallel, true)->DenseRange(3, 5)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_LimitScan, serial, false)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_LimitScan, parallel, true)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
