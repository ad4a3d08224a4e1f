#include <benchmark/benchmark.h>

#include "binpack/distribution.hpp"
#include "binpack/harness.hpp"
#include "binpack/oracle.hpp"
#include "binpack/policy_baselines.hpp"
#include "binpack/policy_lp_adaptive.hpp"
#include "binpack/policy_overflow.hpp"
#include "binpack/rng.hpp"
#include "binpack/simplex.hpp"
#include "binpack/theory_checks.hpp"

namespace {

using namespace binpack;

const DistributionSpec& bounded_waste() {
  static const DistributionSpec spec = builtin_distribution("bounded-waste");
  return spec;
}

void BM_SolveFractionalDiscrete(benchmark::State& state) {
  const Instance inst = sample_iid(bounded_waste(), state.range(0), 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_fractional(inst).value);
  }
}
BENCHMARK(BM_SolveFractionalDiscrete)->Arg(256)->Arg(2048);

void BM_SolveFractionalContinuous(benchmark::State& state) {
  const Instance inst = sample_iid(make_uniform(), state.range(0), 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_fractional(inst).value);
  }
}
BENCHMARK(BM_SolveFractionalContinuous)->Arg(64)->Arg(256);

void BM_SolveExactDiscrete(benchmark::State& state) {
  const Instance inst = sample_iid(bounded_waste(), state.range(0), 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_exact(inst).bins);
  }
}
BENCHMARK(BM_SolveExactDiscrete)->Arg(128)->Arg(1024);

void BM_SolveFfd(benchmark::State& state) {
  const Instance inst = sample_iid(make_uniform(), state.range(0), 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_ffd(inst).bins);
  }
}
BENCHMARK(BM_SolveFfd)->Arg(4096);

void BM_LindleyQueue(benchmark::State& state) {
  Rng rng(11);
  const TokenSequence seq = make_sign_permutation(state.range(0), rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lindley_queue(seq.tokens).final_q);
  }
}
BENCHMARK(BM_LindleyQueue)->Arg(1 << 15);

void BM_OverflowRun(benchmark::State& state) {
  const std::int64_t T = state.range(0);
  const Instance arrivals = sample_iid(bounded_waste(), T, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_overflow_policy(arrivals, T).bins);
  }
}
BENCHMARK(BM_OverflowRun)->Arg(256)->Arg(1024);

void BM_LpAdaptiveRun(benchmark::State& state) {
  const std::int64_t T = state.range(0);
  const Instance arrivals = sample_iid(bounded_waste(), T, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_lp_adaptive_policy(arrivals, T, 13).bins);
  }
}
BENCHMARK(BM_LpAdaptiveRun)->Arg(64)->Arg(256);

void BM_SumOfSquaresRun(benchmark::State& state) {
  const Instance arrivals = sample_iid(bounded_waste(), state.range(0), 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_baseline_policy(arrivals, BaselinePolicy::SumOfSquares).bins);
  }
}
BENCHMARK(BM_SumOfSquaresRun)->Arg(4096);

}  // namespace

BENCHMARK_MAIN();
