#include <benchmark/benchmark.h>

#include "tpnls/potential.hpp"
#include "tpnls/profiles.hpp"
#include "tpnls/regions.hpp"
#include "tpnls/stability.hpp"

using namespace tpnls;

static void BM_FirstPositiveZero(benchmark::State& state) {
    const GeneralCoeffs c = ModelParams{kFF, 0.1, 2.6}.coeffs();
    const auto method = state.range(0) ? RootMethod::ClosedForm : RootMethod::Bracketing;
    for (auto _ : state) benchmark::DoNotOptimize(first_positive_zero(c, kDefaultRootTol, method));
}
BENCHMARK(BM_FirstPositiveZero)->Arg(0)->Arg(1);

static void BM_StabilityJ(benchmark::State& state) {
    const GeneralCoeffs c = ModelParams{kFF, 1.0, 1.7}.coeffs();
    QuadOptions q;
    q.formula = static_cast<JFormula>(state.range(0));
    state.SetLabel(std::string(formula_name(q.formula)));
    for (auto _ : state) benchmark::DoNotOptimize(stability_j(c, q).j);
}
BENCHMARK(BM_StabilityJ)->DenseRange(0, 3);

static void BM_Sweep(benchmark::State& state) {
    const int n = int(state.range(0));
    SweepOptions so;
    so.threads = 1;
    for (auto _ : state) benchmark::DoNotOptimize(sweep(kFF, Window{0.0104, 0.603, 0.0, 10.0, n, n}, so));
    state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_Sweep)->Arg(25)->Arg(50)->Unit(benchmark::kMillisecond);

static void BM_Contour(benchmark::State& state) {
    const ScalarField f = sweep(kDF, Window{0.001, 1.0, -10.0, 10.0, 100, 100});
    for (auto _ : state) benchmark::DoNotOptimize(extract_level_curves(f, {0.0}));
}
BENCHMARK(BM_Contour);

static void BM_Profile(benchmark::State& state) {
    const GeneralCoeffs c = ModelParams{kFF, 1.0, 1.7}.coeffs();
    const GridSpec grid{50.0, 0.01, true};
    for (auto _ : state) {
        switch (state.range(0)) {
            case 0: benchmark::DoNotOptimize(quadrature_profile(c, grid)); break;
            case 1: benchmark::DoNotOptimize(solve_profile(c, grid)); break;
            case 2: benchmark::DoNotOptimize(crop(shoot(c, grid.T), grid.dt)); break;
        }
    }
    state.SetLabel(state.range(0) == 0 ? "quadrature" : state.range(0) == 1 ? "bvp" : "shoot");
}
BENCHMARK(BM_Profile)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
