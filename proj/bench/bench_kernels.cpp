// Serial reference kernels against their OpenMP versions.
//
//   ./bench_kernels --benchmark_filter=Matmul
//   OMP_NUM_THREADS=8 ./bench_kernels

#include <benchmark/benchmark.h>

#include "optisketch/kernels.hpp"
#include "optisketch/projection.hpp"

namespace {

using optisketch::BinaryMatrix;
using optisketch::ComplexMatrix;
using optisketch::ComplexVector;
using optisketch::CounterStream;
using optisketch::Execution;
using optisketch::Matrix;
using optisketch::Purpose;

Matrix gaussian(Eigen::Index rows, Eigen::Index cols, std::uint32_t stream) {
  Matrix a(rows, cols);
  optisketch::kernels::serial::fill_gaussian(CounterStream({7, stream, Purpose::Experiment}), 1.0, a);
  return a;
}

BinaryMatrix half_density(Eigen::Index rows, Eigen::Index cols) {
  const CounterStream rng({7, 99, Purpose::Experiment});
  BinaryMatrix b(rows, cols);
  for (Eigen::Index k = 0; k < b.size(); ++k) b.data()[k] = rng.bit(static_cast<std::uint64_t>(k)) ? 1 : 0;
  return b;
}

Execution policy(const benchmark::State& state) {
  return state.range(1) == 0 ? Execution::Serial : Execution::Parallel;
}

void label(benchmark::State& state) { state.SetLabel(state.range(1) == 0 ? "serial" : "omp"); }

void BM_FillGaussian(benchmark::State& state) {
  Matrix out(state.range(0), state.range(0));
  const CounterStream rng({1, 0, Purpose::DenseMatrix});
  for (auto _ : state) {
    optisketch::kernels::fill_gaussian(rng, 1.0, out, policy(state));
    benchmark::DoNotOptimize(out.data());
  }
  label(state);
}

void BM_Matmul(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  const Matrix r = gaussian(n, n, 0), x = gaussian(n, 64, 1);
  for (auto _ : state) benchmark::DoNotOptimize(optisketch::kernels::matmul(r, x, policy(state)));
  label(state);
}

void BM_Interference(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  ComplexMatrix c(n, n);
  optisketch::kernels::serial::fill_complex_gaussian(CounterStream({1, 0, Purpose::OpticalMatrix}), 0.1, c);
  const ComplexVector ref = c.rowwise().sum();
  const BinaryMatrix planes = half_density(n, 64);
  Matrix signal, mixed;
  for (auto _ : state) {
    optisketch::kernels::interference_intensities(c, ref, planes, signal, mixed, policy(state));
    benchmark::DoNotOptimize(mixed.data());
  }
  label(state);
}

void BM_TraceCubed(benchmark::State& state) {
  const Matrix s = gaussian(state.range(0), state.range(0), 2);
  for (auto _ : state) benchmark::DoNotOptimize(optisketch::kernels::trace_of_product3(s, s, s, policy(state)));
  label(state);
}

void BM_LinearizedProjection(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  optisketch::ProjectionConfig config;
  config.input_dim = n;
  config.output_dim = n;
  config.seed = 3;
  config.backend = optisketch::Backend::OpticalLinearized;
  const optisketch::LinearizedProjector p(config);
  const Matrix x = gaussian(state.range(0), 16, 4);
  for (auto _ : state) benchmark::DoNotOptimize(p.project(x, 8, policy(state)));
  label(state);
}

void sizes(benchmark::internal::Benchmark* b) {
  for (long n : {256, 1024})
    for (long par : {0, 1}) b->Args({n, par});
}

}  // namespace

BENCHMARK(BM_FillGaussian)->Apply(sizes)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Matmul)->Apply(sizes)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Interference)->Apply(sizes)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TraceCubed)->Apply(sizes)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LinearizedProjection)->Args({256, 0})->Args({256, 1})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
