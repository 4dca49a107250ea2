#include <benchmark/benchmark.h>

#include <vector>

#include "qims/hamiltonian.hpp"
#include "qims/pfaffian.hpp"

namespace {

using namespace qims;
using R = Rational;

Parameters<R> level_params(int L, int N, int M) {
  std::vector<R> e(L, R(0)), kappa(L, make_rational(1, 3)), theta;
  e.back() = make_rational(L - 1, 2);
  R sum_theta = 0;
  for (int i = 1; i <= N; ++i) {
    theta.push_back(make_rational(i, 5));
    sum_theta += theta.back();
  }
  kappa[0] = R(M) + sum_theta;
  return make_parameters(L, N, e, kappa, theta);
}

std::vector<R> points(int N) {
  std::vector<R> z;
  for (int i = 1; i <= N; ++i) z.push_back(make_rational(2 * (N - i) + 1, 2 * N + 2));
  return z;
}

void BM_CommutatorResidual(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0)), N = static_cast<int>(state.range(1));
  const auto p = level_params(L, N, 1);
  const auto z = points(N);
  const auto probes = enumerate_basis(L, N, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        commutator_residual(1, N, p, std::span<const R>(z), std::span<const MultiIndex>(probes)));
  }
  state.counters["probes"] = static_cast<double>(probes.size());
}
BENCHMARK(BM_CommutatorResidual)->Args({2, 2})->Args({3, 2})->Args({2, 3})->Unit(benchmark::kMillisecond);

void BM_BuildPfaffianSystem(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0)), N = static_cast<int>(state.range(1));
  const int M = static_cast<int>(state.range(2));
  const auto p = level_params(L, N, M);
  for (auto _ : state) {
    const PfaffianSystem<R> sys(p, Space::level(M));
    benchmark::DoNotOptimize(sys.dimension());
  }
}
BENCHMARK(BM_BuildPfaffianSystem)->Args({2, 2, 2})->Args({3, 2, 2})->Args({3, 2, 4})->Unit(benchmark::kMillisecond);

void BM_MatrixAt(benchmark::State& state) {
  const auto p = level_params(3, 2, 3);
  const PfaffianSystem<Complex> sys(PfaffianSystem<R>(p, Space::level(3)));
  const std::vector<Complex> z{Complex(0.6, 0.1), Complex(0.3)};
  for (auto _ : state) benchmark::DoNotOptimize(sys.matrix_at(1, std::span<const Complex>(z)));
}
BENCHMARK(BM_MatrixAt);

}  // namespace
