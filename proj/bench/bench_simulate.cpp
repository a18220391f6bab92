// Serial reference loop vs the batched OpenMP simulator on the same fields.

#include <benchmark/benchmark.h>

#include "brsim/point_process.hpp"
#include "brsim/simulator.hpp"

using namespace brsim;

namespace {

const FactorizedGaussian &field(std::size_t n) {
  static const FactorizedGaussian f64(SiteSet::grid("0:0.984375:0.015625"), VariogramModel(1.0));
  static const FactorizedGaussian f256(SiteSet::grid("0:0.99609375:0.00390625"),
                                       VariogramModel(1.0));
  return n == 64 ? f64 : f256;
}

void BM_Reference(benchmark::State &state) {
  const auto &fg = field(static_cast<std::size_t>(state.range(0)));
  const auto measure = SamplingMeasure::uniform(fg.size());
  SimulationOptions opt;
  std::uint32_t rep = 0;
  for (auto _ : state) {
    opt.replication = rep++;
    benchmark::DoNotOptimize(simulate_reference(fg, measure, opt).values.data());
  }
}

void BM_Batched(benchmark::State &state) {
  const auto &fg = field(static_cast<std::size_t>(state.range(0)));
  const auto measure = SamplingMeasure::uniform(fg.size());
  SimulationOptions opt;
  opt.workers = static_cast<int>(state.range(1));
  std::uint32_t rep = 0;
  for (auto _ : state) {
    opt.replication = rep++;
    benchmark::DoNotOptimize(simulate(fg, measure, opt).values.data());
  }
}

void BM_Replications(benchmark::State &state) {
  const auto &fg = field(64);
  const auto measure = SamplingMeasure::uniform(fg.size());
  SimulationOptions opt;
  opt.workers = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_replications(fg, measure, opt, 256).data());
  }
}

} // namespace

BENCHMARK(BM_Reference)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Batched)
    ->ArgsProduct({{64, 256}, {1, 2, 4, 8}})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Replications)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
