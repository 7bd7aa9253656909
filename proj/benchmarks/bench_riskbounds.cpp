#include <benchmark/benchmark.h>

#include "mix/riskbounds.hpp"

namespace {

void BM_WvarUniform(benchmark::State& state) {
  const std::vector<mix::DistributionSpec> specs(3, mix::uniform(0, 1));
  mix::RiskBoundOptions o;
  o.grid = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mix::wvar_estimate(specs, mix::Rational(9, 10), o).worst->estimate);
  }
}
BENCHMARK(BM_WvarUniform)->Arg(100)->Arg(1000)->Arg(4000);

void BM_PhiNormal(benchmark::State& state) {
  const std::vector<mix::DistributionSpec> specs(4, mix::normal(0, 1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mix::phi_upper_bound(specs, mix::Rational(99, 100)).value);
  }
}
BENCHMARK(BM_PhiNormal);

}  // namespace

BENCHMARK_MAIN();
