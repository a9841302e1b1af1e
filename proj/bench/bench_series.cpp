// Serial reference vs OpenMP hourly OPF series.
#include <benchmark/benchmark.h>

#include <vector>

#include "flexhedge/opf.hpp"
#include "flexhedge/scenario.hpp"

namespace {

using namespace flexhedge;

// `days` preset days back to back, so the series is long enough to split.
struct Workload {
  Network net;
  std::vector<HourlyMarketData> hours;
  std::vector<PriceCap> caps{PriceCap::flat(3, 70.0)};
};

Workload make_workload(int days) {
  Workload w;
  for (int d = 0; d < days; ++d) {
    auto sc = scenario::generate_scenario(
        scenario::paper_3bus_spec(scenario::LineLimitCase::finite(), static_cast<std::uint64_t>(d + 1)));
    w.net = sc.net;
    w.hours.insert(w.hours.end(), sc.hours.begin(), sc.hours.end());
  }
  return w;
}

void BM_SeriesSerial(benchmark::State& state) {
  const Workload w = make_workload(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(opf::solve_opf_series_serial(w.net, w.hours, w.caps, true));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(w.hours.size()));
}

void BM_SeriesParallel(benchmark::State& state) {
  const Workload w = make_workload(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(opf::solve_opf_series(w.net, w.hours, w.caps, true));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(w.hours.size()));
}

}  // namespace

BENCHMARK(BM_SeriesSerial)->Arg(1)->Arg(30);
BENCHMARK(BM_SeriesParallel)->Arg(1)->Arg(30);

BENCHMARK_MAIN();
