#include <benchmark/benchmark.h>

#include "kipt/growing_cholesky.hpp"
#include "kipt/sampler.hpp"

using namespace kipt;

namespace {

// Appending N points one by one (the full incremental factorization).
void BM_AppendChain(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Mode mode = state.range(1) ? Mode::Hermite : Mode::Lagrange;
    const int b = mode == Mode::Hermite ? 3 : 1;
    KernelSpec spec(Family::Gaussian, 3.0, 2);
    const PointSet pts = random_box(n, Box::cube(0.0, 1.0, 2), 1);

    for (auto _ : state) {
        GrowingCholesky chol(b, n);
        for (int j = 0; j < n; ++j)
            chol.append(cross_block(spec, pts.points().leftCols(j), pts.point(j), mode));
        benchmark::DoNotOptimize(chol.log_det());
    }
    state.SetComplexityN(n);
}
BENCHMARK(BM_AppendChain)->Args({50, 0})->Args({100, 0})->Args({200, 0})->Args({50, 1})->Args({100, 1});

// Scoring one candidate block against a factorization of k points.
void BM_SchurScore(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    KernelSpec spec(Family::Gaussian, 3.0, 2);
    const PointSet pts = random_box(k + 1, Box::cube(0.0, 1.0, 2), 2);
    GrowingCholesky chol(1, k);
    for (int j = 0; j < k; ++j)
        chol.append(cross_block(spec, pts.points().leftCols(j), pts.point(j), Mode::Lagrange));
    const CrossBlock cb = cross_block(spec, pts.points().leftCols(k), pts.point(k),
                                      Mode::Lagrange);
    for (auto _ : state) benchmark::DoNotOptimize(chol.schur_logdet(cb));
}
BENCHMARK(BM_SchurScore)->Arg(50)->Arg(100)->Arg(200)->Arg(400);

void BM_AssembleHermite(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    KernelSpec spec(Family::IMQ, 3.0, 2);
    const PointSet pts = random_box(n, Box::cube(0.0, 1.0, 2), 3);
    for (auto _ : state) {
        auto mat = assemble_hermite(spec, pts, Ordering::PointMajor);
        benchmark::DoNotOptimize(mat.data.data());
    }
}
BENCHMARK(BM_AssembleHermite)->Arg(25)->Arg(50)->Arg(100);

}  // namespace
