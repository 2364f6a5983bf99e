// Serial reference vs OpenMP kernels on a 3D stencil operator.
// Run with --benchmark_filter=... to narrow; thread count comes from
// OMP_NUM_THREADS.

#include "specpart/generators.hpp"
#include "specpart/kernels.hpp"
#include "specpart/laplacian.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace specpart;
namespace k = specpart::kernels;

namespace {

struct Fixture {
    LinearOperator L;
    Dense X;
    Dense Y;

    explicit Fixture(std::int64_t side, int cols) {
        Graph g = generate(GeneratorSpec::stencil3d(side, side, side, 27));
        L = build_combinatorial(g);
        std::mt19937_64 rng(1);
        X = Dense(g.n(), cols);
        for (double& v : X.data) v = 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
        Y = Dense(g.n(), cols);
    }
};

Fixture& fixture() {
    static Fixture f(24, 8); // 13824 rows, 27-point stencil, 8 columns
    return f;
}

void BM_spmv_block_serial(benchmark::State& state) {
    Fixture& f = fixture();
    for (auto _ : state) {
        k::spmv_block_serial(f.L.matrix, f.X, f.Y);
        benchmark::DoNotOptimize(f.Y.data.data());
    }
    state.SetItemsProcessed(state.iterations() * f.L.matrix.nnz() * f.X.cols);
}

void BM_spmv_block_omp(benchmark::State& state) {
    Fixture& f = fixture();
    for (auto _ : state) {
        k::spmv_block(f.L.matrix, f.X, f.Y);
        benchmark::DoNotOptimize(f.Y.data.data());
    }
    state.SetItemsProcessed(state.iterations() * f.L.matrix.nnz() * f.X.cols);
}

void BM_gram_serial(benchmark::State& state) {
    Fixture& f = fixture();
    for (auto _ : state) {
        Dense G = k::gram_serial(f.X, f.X);
        benchmark::DoNotOptimize(G.data.data());
    }
}

void BM_gram_omp(benchmark::State& state) {
    Fixture& f = fixture();
    for (auto _ : state) {
        Dense G = k::gram(f.X, f.X);
        benchmark::DoNotOptimize(G.data.data());
    }
}

void BM_mult_serial(benchmark::State& state) {
    Fixture& f = fixture();
    Dense C(f.X.cols, f.X.cols);
    for (std::int64_t i = 0; i < C.rows; ++i) C(i, i) = 1.0;
    for (auto _ : state) {
        k::mult_serial(f.X, C, f.Y);
        benchmark::DoNotOptimize(f.Y.data.data());
    }
}

void BM_mult_omp(benchmark::State& state) {
    Fixture& f = fixture();
    Dense C(f.X.cols, f.X.cols);
    for (std::int64_t i = 0; i < C.rows; ++i) C(i, i) = 1.0;
    for (auto _ : state) {
        k::mult(f.X, C, f.Y);
        benchmark::DoNotOptimize(f.Y.data.data());
    }
}

} // namespace

BENCHMARK(BM_spmv_block_serial);
BENCHMARK(BM_spmv_block_omp);
BENCHMARK(BM_gram_serial);
BENCHMARK(BM_gram_omp);
BENCHMARK(BM_mult_serial);
BENCHMARK(BM_mult_omp);

BENCHMARK_MAIN();
