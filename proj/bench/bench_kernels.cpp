#include <cstdint>
#include <random>

#include <benchmark/benchmark.h>

#include "adago/linalg/kernels.hpp"
#include "adago/linalg/orthogonalize.hpp"
#include "adago/linalg/svd.hpp"

using adago::linalg::Matrix;

namespace {

Matrix gaussian(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    Matrix m(rows, cols);
    for (auto& x : m.data()) x = n(rng);
    return m;
}

void BM_matmul_parallel(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Matrix a = gaussian(n, n, 1), b = gaussian(n, n, 2);
    for (auto _ : state) benchmark::DoNotOptimize(adago::linalg::matmul(a, b));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n * n));
}

void BM_matmul_serial(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Matrix a = gaussian(n, n, 1), b = gaussian(n, n, 2);
    for (auto _ : state) benchmark::DoNotOptimize(adago::linalg::serial::matmul(a, b));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n * n));
}

// Rows × cols with rows = 5·cols mimics the hidden-layer weight shapes.
void BM_svd_parallel(benchmark::State& state) {
    const auto c = static_cast<std::size_t>(state.range(0));
    const Matrix m = gaussian(5 * c, c, 3);
    for (auto _ : state) benchmark::DoNotOptimize(adago::linalg::svd_reduced(m));
}

void BM_svd_serial(benchmark::State& state) {
    const auto c = static_cast<std::size_t>(state.range(0));
    const Matrix m = gaussian(5 * c, c, 3);
    for (auto _ : state) benchmark::DoNotOptimize(adago::linalg::serial::svd_reduced(m));
}

void BM_newton_schulz(benchmark::State& state) {
    const auto c = static_cast<std::size_t>(state.range(0));
    const Matrix m = gaussian(5 * c, c, 4);
    for (auto _ : state) benchmark::DoNotOptimize(adago::linalg::orthogonalize_newton_schulz(m, 5));
}

} // namespace

BENCHMARK(BM_matmul_parallel)->Arg(64)->Arg(128)->Arg(256);
BENCHMARK(BM_matmul_serial)->Arg(64)->Arg(128)->Arg(256);
BENCHMARK(BM_svd_parallel)->Arg(20)->Arg(50)->Arg(100);
BENCHMARK(BM_svd_serial)->Arg(20)->Arg(50)->Arg(100);
BENCHMARK(BM_newton_schulz)->Arg(20)->Arg(50)->Arg(100);

BENCHMARK_MAIN();
