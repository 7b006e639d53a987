#include <benchmark/benchmark.h>

#include "ultimum/montecarlo.hpp"
#include "ultimum/stopping.hpp"

using namespace ultimum;

namespace {

const ProcessFamily kBrownian{BrownianDrift{1.0, -0.5}};
const ProcessFamily kJump{JumpDiffusion{0.5, 0.5, 1.0, 1.0}};
const ProcessFamily kPoisson{CompoundPoissonDrift{2.0, 5.0, 0.2}};

const ProcessFamily& family(int i) {
    static const ProcessFamily* all[] = {&kBrownian, &kJump, &kPoisson};
    return *all[i];
}

void BM_ScaleW(benchmark::State& state) {
    const ScaleModel m(family(static_cast<int>(state.range(0))));
    double x = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(scale_w(m, x));
        x = x < 5.0 ? x + 1e-3 : 0.0;
    }
}
BENCHMARK(BM_ScaleW)->DenseRange(0, 2);

void BM_TalbotInversion(benchmark::State& state) {
    const auto& f = family(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(invert_laplace_scale(f, 1.0));
}
BENCHMARK(BM_TalbotInversion)->DenseRange(0, 2);

void BM_SolveThreshold(benchmark::State& state) {
    const ScaleModel m(family(static_cast<int>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(solve_threshold(m));
}
BENCHMARK(BM_SolveThreshold)->DenseRange(0, 2)->Unit(benchmark::kMicrosecond);

void BM_Solve(benchmark::State& state) {
    const ScaleModel m(family(static_cast<int>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(solve(m));
}
BENCHMARK(BM_Solve)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

// Paths per second of the objective estimator, single worker.
void BM_ObjectivePaths(benchmark::State& state) {
    const auto& f = family(static_cast<int>(state.range(0)));
    PathConfig c;
    c.store_full_path = false;
    const double y = solve_threshold(ScaleModel(f));
    std::uint64_t seed = 1;
    constexpr std::size_t n = 200;
    for (auto _ : state) benchmark::DoNotOptimize(estimate_objective(f, y, n, c, seed++, McOptions{1, 0.01}));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_ObjectivePaths)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
