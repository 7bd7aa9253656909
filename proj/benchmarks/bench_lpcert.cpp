#include <benchmark/benchmark.h>

#include "mix/lpcert.hpp"

namespace {

// n copies of the uniform law on {0, ..., k-1}.
void BM_LpUniformCopies(benchmark::State& state) {
  const auto k = static_cast<long>(state.range(0));
  std::vector<mix::Rational> atoms;
  for (long i = 0; i < k; ++i) atoms.emplace_back(i);
  const std::vector<mix::DiscreteDistribution> marginals(3, mix::equal_weight(atoms));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mix::jm_lp_decide(marginals).status);
  }
}
BENCHMARK(BM_LpUniformCopies)->DenseRange(2, 6);

// Infeasible: the dual certificate path.
void BM_LpDual(benchmark::State& state) {
  const std::vector<mix::Rational> pts{0, 1, 5}, w{mix::Rational(1, 2), mix::Rational(1, 4), mix::Rational(1, 4)};
  const std::vector<mix::DiscreteDistribution> marginals(static_cast<std::size_t>(state.range(0)),
                                                         mix::make_discrete(pts, w));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mix::jm_lp_decide(marginals).status);
  }
}
BENCHMARK(BM_LpDual)->DenseRange(2, 4);

}  // namespace

BENCHMARK_MAIN();
