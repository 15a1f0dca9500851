#include <benchmark/benchmark.h>

#include <random>

#include "fsrkit/analysis.hpp"
#include "fsrkit/circuit.hpp"
#include "fsrkit/fsr.hpp"
#include "fsrkit/lfsr.hpp"
#include "fsrkit/reduction.hpp"

using namespace fsrkit;

namespace {

const Circuit& alg1_circuit() {
  static const Circuit c = build_irreducibility_fsr(projection(2, 0)).f1_circuit;
  return c;
}

Fsr random_nonsingular(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  TruthTable t(n);
  for (std::uint64_t x = 0; x < t.size(); x += 2) {
    const bool b = rng() & 1u;
    t.set(x, b);
    t.set(x + 1, !b);
  }
  return Fsr(std::move(t));
}

void BM_TruthTableParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(truth_table(alg1_circuit()));
}
void BM_TruthTableSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(truth_table_serial(alg1_circuit()));
}

void BM_CycleStructureParallel(benchmark::State& state) {
  const Fsr f = random_nonsingular(static_cast<std::size_t>(state.range(0)), 11);
  for (auto _ : state) benchmark::DoNotOptimize(cycle_structure(f));
}
void BM_CycleStructureSerial(benchmark::State& state) {
  const Fsr f = random_nonsingular(static_cast<std::size_t>(state.range(0)), 11);
  for (auto _ : state) benchmark::DoNotOptimize(cycle_structure_serial(f));
}

void brute(benchmark::State& state, bool parallel) {
  // Indecomposable, so every inner table up to stage 3 is tried.
  const Fsr f = lfsr_of(parse_poly("x^4+x+1"));
  DecomposeOptions opts;
  opts.parallel = parallel;
  for (auto _ : state) benchmark::DoNotOptimize(is_decomposable(f, opts));
}
void BM_BruteParallel(benchmark::State& state) { brute(state, true); }
void BM_BruteSerial(benchmark::State& state) { brute(state, false); }

}  // namespace

BENCHMARK(BM_TruthTableParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TruthTableSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CycleStructureParallel)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CycleStructureSerial)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BruteParallel)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_BruteSerial)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
