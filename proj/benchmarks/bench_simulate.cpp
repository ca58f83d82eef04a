#include "wavebt/simulate.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace wavebt;

constexpr auto g0 = BoundaryLabel::gamma0;

WaveBoundarySystem closed_system_1d(int n) {
  const auto t = build_staggered_1d(n, 1.0, {g0, g0});
  const auto m = MaterialField::constant(t, 1.0, 1.0);
  return assemble_impedance_system(t, m, {});
}

void BM_StepperFactor(benchmark::State& state) {
  const auto sys = closed_system_1d(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    MidpointStepper stepper(sys, 1e-3, 1e-12);
    benchmark::DoNotOptimize(stepper);
  }
}
BENCHMARK(BM_StepperFactor)->Arg(64)->Arg(256);

void BM_SimulateClosed(benchmark::State& state) {
  const auto sys = closed_system_1d(static_cast<int>(state.range(0)));
  SimulationConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 0.25;
  cfg.initial.kind = InitialState::Kind::random;
  cfg.initial.seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate(sys, cfg));
  }
}
BENCHMARK(BM_SimulateClosed)->Arg(64)->Arg(256);

}  // namespace
