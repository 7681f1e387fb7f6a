#include <benchmark/benchmark.h>

#include <random>

#include "mutualcover/bounds.hpp"
#include "mutualcover/oracle.hpp"
#include "mutualcover/sampler.hpp"
#include "mutualcover/spectrum.hpp"

namespace {

using namespace mutualcover;

JointPmf random_joint(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> exp1(1.0);
  Matrix m(rows, std::vector<double>(cols));
  double total = 0.0;
  for (auto& row : m)
    for (auto& x : row) total += x = exp1(rng);
  for (auto& row : m)
    for (auto& x : row) x /= total;
  return build_joint(m);
}

void BM_ExactFailure(benchmark::State& state) {
  const auto j = random_joint(4, 4, 1);
  const auto f = truncated_set(j, CoveringSet::full(4, 4), 0.0);
  const int l = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(exact_failure(j, f, 8, l));
}
BENCHMARK(BM_ExactFailure)->Arg(4)->Arg(16)->Arg(64);

void BM_McFailure(benchmark::State& state) {
  const auto j = random_joint(4, 4, 2);
  const auto f = truncated_set(j, CoveringSet::full(4, 4), 0.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        mc_failure(j, f, {8, 8, 11, 10000}, static_cast<unsigned>(state.range(0))));
}
BENCHMARK(BM_McFailure)->Arg(1)->Arg(4)->UseRealTime();

void BM_OptimalPairSampler(benchmark::State& state) {
  const auto j = random_joint(2, 2, 3);
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(optimal_pair_sampler(j, m, m, 100000));
}
BENCHMARK(BM_OptimalPairSampler)->Arg(1)->Arg(2)->Arg(3);

void BM_DualityCheck(benchmark::State& state) {
  const auto j = random_joint(2, 2, 4);
  for (auto _ : state) benchmark::DoNotOptimize(duality_check(j, 2, 2, 100000, 1));
}
BENCHMARK(BM_DualityCheck);

void BM_TypicalBound(benchmark::State& state) {
  const auto s = spectrum_power(info_spectrum(random_joint(3, 3, 5)),
                                static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(typical_bound_optimized(s, 0.5, 1e3, 1e3));
}
BENCHMARK(BM_TypicalBound)->Arg(1)->Arg(4)->Arg(12);

}  // namespace

BENCHMARK_MAIN();
