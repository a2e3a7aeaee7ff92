#include <benchmark/benchmark.h>

#include "aqec/channel.hpp"
#include "aqec/code.hpp"
#include "aqec/ensemble.hpp"
#include "aqec/linalg.hpp"
#include "aqec/qec.hpp"
#include "aqec/random.hpp"
#include "aqec/typicality.hpp"

namespace {

using namespace aqec;

void bm_haar_unitary(benchmark::State& state) {
  RandomStream rng(1);
  const int dim = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(haar_unitary(dim, rng));
  }
}
BENCHMARK(bm_haar_unitary)->Arg(8)->Arg(32)->Arg(128);

void bm_trace_norm(benchmark::State& state) {
  RandomStream rng(2);
  const int dim = static_cast<int>(state.range(0));
  CMat a(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) a(i, j) = rng.complex_gaussian();
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(trace_norm(a));
  }
}
BENCHMARK(bm_trace_norm)->Arg(16)->Arg(64)->Arg(256);

void bm_build_d(benchmark::State& state) {
  RandomStream rng(3);
  const int m = static_cast<int>(state.range(0));
  const KrausChannel ch = random_channel(m, 3, rng);
  const CodeSpace code = random_code(m, 2, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_D(ch, code));
  }
}
BENCHMARK(bm_build_d)->Arg(8)->Arg(16)->Arg(32);

void bm_sampled_defect_moment(benchmark::State& state) {
  RandomStream rng(4);
  const KrausChannel ch = random_channel(8, 3, rng);
  const long long samples = state.range(0);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const EnsembleSpec spec = full_space_ensemble(8, 2, samples, seed++);
    benchmark::DoNotOptimize(mc_avg_d_frobenius_sq(ch, spec));
  }
}
BENCHMARK(bm_sampled_defect_moment)->Arg(100)->Arg(1000);

void bm_reduced_operation(benchmark::State& state) {
  const KrausChannel ch = phase_flip(0.1);
  const CMat v = CMat::Identity(2, 2);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(reduced_operation(ch, v, n, 0.15));
  }
}
BENCHMARK(bm_reduced_operation)->Arg(4)->Arg(8)->Arg(10);

void bm_uhlmann_recovery(benchmark::State& state) {
  RandomStream rng(5);
  const int m = static_cast<int>(state.range(0));
  const KrausChannel ch = random_channel(m, 3, rng);
  const CodeSpace code = random_code(m, 2, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(uhlmann_recovery(ch, code));
  }
}
BENCHMARK(bm_uhlmann_recovery)->Arg(4)->Arg(8)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
