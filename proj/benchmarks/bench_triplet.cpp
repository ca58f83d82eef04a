#include "wavebt/triplet.hpp"

#include <benchmark/benchmark.h>

namespace {

constexpr auto g0 = wavebt::BoundaryLabel::gamma0;
constexpr auto g2 = wavebt::BoundaryLabel::gamma2;

void BM_Build2D(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        wavebt::build_staggered_2d(n, n, 1.0, 1.0, {g0, g2, g0, g2}));
  }
}
BENCHMARK(BM_Build2D)->Arg(8)->Arg(16)->Arg(32);

void BM_GreenIdentity(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto t = wavebt::build_staggered_2d(n, n, 1.0, 1.0, {g0, g2, g0, g2});
  for (auto _ : state) {
    benchmark::DoNotOptimize(wavebt::verify_green_identity(t, 10, 7));
  }
}
BENCHMARK(BM_GreenIdentity)->Arg(8)->Arg(16)->Arg(32);

}  // namespace
