#include <benchmark/benchmark.h>

#include "sweepcert/geometry.hpp"

using namespace sweepcert;

static void bm_place_triangle_hyperbolic(benchmark::State& state) {
  for (auto _ : state) {
    auto t = place_triangle(Model::Hyperbolic, 0.9, 1.1, 0.8);
    benchmark::DoNotOptimize(t);
  }
}
BENCHMARK(bm_place_triangle_hyperbolic);

BENCHMARK_MAIN();
