#include "wavebt/linalg.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

wavebt::Matrix gaussian(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  wavebt::Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = g(rng);
  return m;
}

void BM_MatrixExponential(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const wavebt::Matrix a = gaussian(n, 1) * (1.0 / n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(wavebt::matrix_exponential(a, 1.0));
  }
}
BENCHMARK(BM_MatrixExponential)->Arg(16)->Arg(33)->Arg(64)->Arg(129);

void BM_OperatorNorm(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const wavebt::Matrix m = gaussian(n, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(wavebt::operator_norm(m));
  }
}
BENCHMARK(BM_OperatorNorm)->Arg(32)->Arg(128)->Arg(512);

void BM_ContractionCertificate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  wavebt::Matrix g = gaussian(n, 3);
  const wavebt::Matrix a = g - g.transpose();
  const wavebt::Matrix w = wavebt::Matrix::Identity(n, n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(wavebt::contraction_certificate(a, w));
  }
}
BENCHMARK(BM_ContractionCertificate)->Arg(33)->Arg(65);

}  // namespace
