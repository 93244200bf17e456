#include <benchmark/benchmark.h>

#include "sharpe/conditional.hpp"
#include "sharpe/distributions.hpp"
#include "sharpe/montecarlo.hpp"
#include "sharpe/random.hpp"
#include "sharpe/statistics.hpp"

namespace {

using namespace sharpe;

const DistributionSpec kStudent = DistributionSpec::student(kDefaultMu, kDefaultSigma, kDefaultNu);
const DistributionSpec kGaussian = DistributionSpec::gaussian(kDefaultMu, kDefaultSigma);

void BM_SampleReturnsGaussian(benchmark::State& state) {
  RandomStream stream(1);
  for (auto _ : state) benchmark::DoNotOptimize(sample_returns(kGaussian, 252, stream));
  state.SetItemsProcessed(state.iterations() * 252);
}
BENCHMARK(BM_SampleReturnsGaussian);

void BM_SampleReturnsStudent(benchmark::State& state) {
  RandomStream stream(1);
  for (auto _ : state) benchmark::DoNotOptimize(sample_returns(kStudent, 252, stream));
  state.SetItemsProcessed(state.iterations() * 252);
}
BENCHMARK(BM_SampleReturnsStudent);

void BM_SampleStats(benchmark::State& state) {
  RandomStream stream(2);
  const auto xs = sample_returns(kStudent, static_cast<std::size_t>(state.range(0)), stream);
  for (auto _ : state) benchmark::DoNotOptimize(sample_stats(xs));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleStats)->Arg(252)->Arg(4096);

void BM_SimulateJoint(benchmark::State& state) {
  const auto workers = static_cast<unsigned>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_joint(kStudent, 252, static_cast<std::size_t>(state.range(0)), 42, workers));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateJoint)->Args({10000, 1})->Args({10000, 0})->Unit(benchmark::kMillisecond);

void BM_ConditionalSharpe(benchmark::State& state) {
  const auto set = simulate_joint(kStudent, 252, static_cast<std::size_t>(state.range(0)), 7);
  const auto grid = default_threshold_grid(set, 101);
  for (auto _ : state) benchmark::DoNotOptimize(conditional_sharpe(set, grid));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ConditionalSharpe)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
