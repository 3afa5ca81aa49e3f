#include <benchmark/benchmark.h>

#include "kipt/greedy_select.hpp"
#include "kipt/sampler.hpp"

using namespace kipt;

namespace {

void BM_GreedySelect(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const int n = static_cast<int>(state.range(1));
    const Mode mode = state.range(2) ? Mode::Hermite : Mode::Lagrange;
    KernelSpec spec(Family::Gaussian, 3.0, 2);
    const PointSet cloud = random_box(m, Box::cube(0.0, 1.0, 2), 7);

    for (auto _ : state) {
        auto sel = greedy_select(spec, cloud, n, mode);
        benchmark::DoNotOptimize(sel.indices.data());
    }
}
BENCHMARK(BM_GreedySelect)
    ->Args({2000, 50, 0})
    ->Args({10000, 100, 0})
    ->Args({10000, 200, 0})
    ->Args({2000, 30, 1})
    ->Unit(benchmark::kMillisecond);

// Reference scoring path, for the cached-vs-recompute cost gap.
void BM_GreedySelectRecompute(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const int n = static_cast<int>(state.range(1));
    KernelSpec spec(Family::Gaussian, 3.0, 2);
    const PointSet cloud = random_box(m, Box::cube(0.0, 1.0, 2), 7);
    GreedyOptions opts;
    opts.scoring = Scoring::Recompute;

    for (auto _ : state) {
        auto sel = greedy_select(spec, cloud, n, Mode::Lagrange, opts);
        benchmark::DoNotOptimize(sel.indices.data());
    }
}
BENCHMARK(BM_GreedySelectRecompute)->Args({2000, 50, 0})->Unit(benchmark::kMillisecond);

}  // namespace
