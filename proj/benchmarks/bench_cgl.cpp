#include <benchmark/benchmark.h>

#include <cmath>

#include "cgl/fixed_points.hpp"
#include "cgl/observables.hpp"
#include "cgl/shooting.hpp"

using namespace cgl;

static const ModelParams kRow1{Sign::plus, Sign::plus, 0.1, 1.0, 1.25104535, 1.1056305};

static void BM_FixedPoints(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(fixed_points(kRow1));
}
BENCHMARK(BM_FixedPoints);

static void BM_Integrate(benchmark::State& state) {
    IntegratorConfig cfg;
    cfg.rel_tol = cfg.abs_tol = std::pow(10.0, -static_cast<double>(state.range(0)));
    cfg.x_max = 10.0;
    std::size_t samples = 0;
    for (auto _ : state) {
        const Trajectory t = integrate(kRow1, FieldState{0.0, 1.0, 0.3, 0.0, 0.0}, cfg);
        samples = t.size();
        benchmark::DoNotOptimize(t.back());
    }
    state.counters["samples"] = static_cast<double>(samples);
}
BENCHMARK(BM_Integrate)->Arg(8)->Arg(10)->Arg(12)->Unit(benchmark::kMicrosecond);

static void BM_BisectMu2(benchmark::State& state) {
    ShootSpec spec = default_spec(0.3);
    spec.mu_tol = std::pow(10.0, -static_cast<double>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(bisect_mu2(spec, 1.2510452783494657).mu2);
}
BENCHMARK(BM_BisectMu2)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

static void BM_SolveEigenpair(benchmark::State& state) {
    const ShootSpec spec = default_spec(std::sqrt(state.range(0) / 10.0));
    for (auto _ : state) benchmark::DoNotOptimize(solve_eigenpair(spec).total_energy);
}
BENCHMARK(BM_SolveEigenpair)->Arg(2)->Arg(14)->Unit(benchmark::kMillisecond);

static void BM_TotalEnergy(benchmark::State& state) {
    const EigenResult r = solve_eigenpair(default_spec(0.3));
    for (auto _ : state) benchmark::DoNotOptimize(total_energy(r.params, r.trajectory, state.range(0)));
}
BENCHMARK(BM_TotalEnergy)->Arg(4096)->Arg(16384)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
