#include <random>

#include <benchmark/benchmark.h>

#include "mix/rearrange.hpp"

namespace {

template <class T>
mix::MatrixInstance<T> random_instance(std::size_t m, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> value(0, 99);
  std::vector<std::vector<T>> cols(n, std::vector<T>(m));
  for (auto& c : cols)
    for (auto& v : c) v = value(rng);
  return mix::MatrixInstance<T>(cols);
}

void BM_LocalSearchDouble(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto inst = random_instance<double>(m, 5, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mix::local_search(inst, mix::Objective::Minimax, 10, 7).value);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LocalSearchDouble)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

void BM_LocalSearchRational(benchmark::State& state) {
  const auto inst = random_instance<mix::Rational>(static_cast<std::size_t>(state.range(0)), 4, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mix::local_search(inst, mix::Objective::Minimax, 5, 7).value);
  }
}
BENCHMARK(BM_LocalSearchRational)->Arg(16)->Arg(64);

void BM_BruteForce(benchmark::State& state) {
  const auto inst = random_instance<mix::Rational>(static_cast<std::size_t>(state.range(0)), 3, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mix::brute_force(inst).value);
  }
}
BENCHMARK(BM_BruteForce)->DenseRange(3, 6);

}  // namespace

BENCHMARK_MAIN();
