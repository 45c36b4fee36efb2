// Serial vs OpenMP kernels. Each benchmark takes the problem size as its
// argument; run with --benchmark_filter to compare one kernel at a time.

#include <benchmark/benchmark.h>

#include <random>

#include "ngca/kernels.hpp"

namespace {

using ngca::Index;
using ngca::Matrix;
using ngca::Vector;
namespace serial = ngca::kernels::serial;
namespace parallel = ngca::kernels::parallel;

Matrix random_matrix(Index rows, Index cols, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  return m;
}

template <class Fn>
void basis(benchmark::State& state, Fn fn) {
  const Matrix X = random_matrix(state.range(0), 10, 1);
  const Matrix C = random_matrix(100, 10, 2);
  const Matrix sq = serial::squared_distances(X, C);
  for (auto _ : state) benchmark::DoNotOptimize(fn(X, C, sq, 1.0, 3));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <class Fn>
void distances(benchmark::State& state, Fn fn) {
  const Matrix X = random_matrix(state.range(0), 10, 1);
  const Matrix C = random_matrix(100, 10, 2);
  for (auto _ : state) benchmark::DoNotOptimize(fn(X, C));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <class Fn>
void gram(benchmark::State& state, Fn fn) {
  const Matrix A = random_matrix(state.range(0), 100, 3);
  for (auto _ : state) benchmark::DoNotOptimize(fn(A));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <class Fn>
void gaussian_gram(benchmark::State& state, Fn fn) {
  const Matrix Y = random_matrix(state.range(0), 10, 4);
  const Matrix M = Matrix::Identity(10, 10);
  for (auto _ : state) benchmark::DoNotOptimize(fn(Y, M, 2.0));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <class Fn>
void beta(benchmark::State& state, Fn fn) {
  const Matrix Y = random_matrix(state.range(0), 10, 5);
  const Vector omega = random_matrix(10, 1, 6).col(0).normalized();
  const Vector z = Y * omega;
  const Vector r = z.array().tanh();
  const Vector rp = 1.0 - r.array().square();
  for (auto _ : state) benchmark::DoNotOptimize(fn(Y, r, rp, omega));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <class Fn>
void imak_moments(benchmark::State& state, Fn fn) {
  const Matrix Y = random_matrix(state.range(0), 10, 7);
  const Matrix M = Matrix::Identity(10, 10);
  const Matrix K = serial::gaussian_gram(Y, M, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(fn(Y, K, M, 2.0));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_distances_serial(benchmark::State& s) { distances(s, serial::squared_distances); }
void BM_distances_parallel(benchmark::State& s) { distances(s, parallel::squared_distances); }
void BM_basis_serial(benchmark::State& s) { basis(s, serial::gaussian_derivative_basis); }
void BM_basis_parallel(benchmark::State& s) { basis(s, parallel::gaussian_derivative_basis); }
void BM_gram_serial(benchmark::State& s) { gram(s, serial::gram); }
void BM_gram_parallel(benchmark::State& s) { gram(s, parallel::gram); }
void BM_gaussian_gram_serial(benchmark::State& s) { gaussian_gram(s, serial::gaussian_gram); }
void BM_gaussian_gram_parallel(benchmark::State& s) { gaussian_gram(s, parallel::gaussian_gram); }
void BM_beta_serial(benchmark::State& s) { beta(s, serial::beta_statistics); }
void BM_beta_parallel(benchmark::State& s) { beta(s, parallel::beta_statistics); }
void BM_imak_moments_serial(benchmark::State& s) { imak_moments(s, serial::imak_moments); }
void BM_imak_moments_parallel(benchmark::State& s) { imak_moments(s, parallel::imak_moments); }

}  // namespace

#define NGCA_RANGE(lo, hi) RangeMultiplier(4)->Range(lo, hi)->Unit(benchmark::kMicrosecond)

BENCHMARK(BM_distances_serial)->NGCA_RANGE(1 << 10, 1 << 16);
BENCHMARK(BM_distances_parallel)->NGCA_RANGE(1 << 10, 1 << 16);
BENCHMARK(BM_basis_serial)->NGCA_RANGE(1 << 10, 1 << 16);
BENCHMARK(BM_basis_parallel)->NGCA_RANGE(1 << 10, 1 << 16);
BENCHMARK(BM_gram_serial)->NGCA_RANGE(1 << 10, 1 << 16);
BENCHMARK(BM_gram_parallel)->NGCA_RANGE(1 << 10, 1 << 16);
BENCHMARK(BM_gaussian_gram_serial)->NGCA_RANGE(1 << 8, 1 << 12);
BENCHMARK(BM_gaussian_gram_parallel)->NGCA_RANGE(1 << 8, 1 << 12);
BENCHMARK(BM_beta_serial)->NGCA_RANGE(1 << 12, 1 << 18);
BENCHMARK(BM_beta_parallel)->NGCA_RANGE(1 << 12, 1 << 18);
BENCHMARK(BM_imak_moments_serial)->NGCA_RANGE(1 << 8, 1 << 11);
BENCHMARK(BM_imak_moments_parallel)->NGCA_RANGE(1 << 8, 1 << 11);

BENCHMARK_MAIN();
