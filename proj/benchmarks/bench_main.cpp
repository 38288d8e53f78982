#include <benchmark/benchmark.h>

static void noop(benchmark::State& st) {
  for (auto _ : st) {
  }
}
BENCHMARK(noop);
BENCHMARK_MAIN();
