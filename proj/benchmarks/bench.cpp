#include <benchmark/benchmark.h>

#include "dchoice/allocation.hpp"
#include "dchoice/feasibility.hpp"
#include "dchoice/scanstat.hpp"

using namespace dchoice;

static void BM_CheckFlow(benchmark::State& state) {
  unsigned n = static_cast<unsigned>(state.range(0));
  StorageAllocation alloc = build(DesignKind::cyclic(), n, 3);
  Rng rng(7);
  std::vector<double> rho(n);
  for (auto& r : rho) r = -std::log(1.0 - rng.next_double());
  for (auto _ : state) benchmark::DoNotOptimize(check_flow(alloc, rho, 1.5).feasible);
}
BENCHMARK(BM_CheckFlow)->Arg(16)->Arg(64)->Arg(256);

static void BM_BuildRandomBlockApprox(benchmark::State& state) {
  unsigned n = static_cast<unsigned>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(build(DesignKind::random_block_approx(), n, 10, seed++));
}
BENCHMARK(BM_BuildRandomBlockApprox)->Arg(100)->Arg(1000);

static void BM_ScanStatistic(benchmark::State& state) {
  unsigned n = static_cast<unsigned>(state.range(0));
  Rng rng(11);
  std::vector<double> xs(n);
  for (auto& x : xs) x = rng.next_double();
  for (auto _ : state) benchmark::DoNotOptimize(scan_statistic(xs, 8, true));
}
BENCHMARK(BM_ScanStatistic)->Arg(100)->Arg(10000);

static void BM_CumOverlap(benchmark::State& state) {
  StorageAllocation alloc = build(DesignKind::random(), 64, 4, 3);
  for (auto _ : state)
    benchmark::DoNotOptimize(cum_overlap(alloc, static_cast<unsigned>(state.range(0))));
}
BENCHMARK(BM_CumOverlap)->Arg(2)->Arg(3);

BENCHMARK_MAIN();
