#include <benchmark/benchmark.h>

#include <random>

#include "vp1d/characteristics.hpp"
#include "vp1d/fields.hpp"
#include "vp1d/profiles.hpp"
#include "vp1d/solver.hpp"

using namespace vp1d;

namespace {

SemiLagrangianSolver make_solver(std::size_t nx, std::size_t nv) {
    const auto sc = build_standard_case(-0.1, 1.0);
    SpatialGrid xg(12.0, nx);
    const VelocityGrid vg = velocity_grid_aligned(1.0, 1.4, nv);
    return SemiLagrangianSolver(sc.background, sc.initial, xg, vg);
}

void BM_semilag_step(benchmark::State& state) {
    auto solver = make_solver(static_cast<std::size_t>(state.range(0)),
                              static_cast<std::size_t>(state.range(1)));
    const double dt = 2.0 * M_PI / 200.0;
    for (auto _ : state) {
        auto diag = solver.step(dt);
        benchmark::DoNotOptimize(diag.mid_field.E.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(1));
}
BENCHMARK(BM_semilag_step)->Args({513, 129})->Args({1025, 257})->Args({2049, 513})
    ->Unit(benchmark::kMillisecond);

void BM_field_solve(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    SpatialGrid grid(12.0, n);
    std::vector<double> rho(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = grid.node(i);
        rho[i] = 0.1 * quartic_bump(x);
    }
    for (auto _ : state) {
        auto fs = field_from_density(rho, grid, 1e-9);
        benchmark::DoNotOptimize(fs.E.data());
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_field_solve)->Arg(2049)->Arg(1 << 15);

void BM_deposit(benchmark::State& state) {
    const std::size_t np = static_cast<std::size_t>(state.range(0));
    SpatialGrid grid(12.0, 2049);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ux(-10.0, 10.0), uw(-1.0, 1.0);
    std::vector<double> X(np), w(np);
    for (std::size_t p = 0; p < np; ++p) {
        X[p] = ux(rng);
        w[p] = uw(rng);
    }
    for (auto _ : state) {
        auto rho = deposit_on_grid(X, w, grid, DepositKernel::quadratic, 1e-4);
        benchmark::DoNotOptimize(rho.data());
    }
    state.SetItemsProcessed(state.iterations() * np);
}
BENCHMARK(BM_deposit)->Arg(100000)->Arg(400000);

struct OscillatingField {
    double E(double t, double x) const { return 0.05 * std::cos(t) * std::tanh(x); }
    double rho(double t, double x) const {
        const double c = std::cosh(x);
        return 0.05 * std::cos(t) / (c * c);
    }
};

void BM_trace_backward(benchmark::State& state) {
    OscillatingField field;
    TraceOptions opt;
    opt.dt = 2.0 * M_PI / 200.0;
    CharacteristicPoint p;
    p.x = 20.0;
    p.v = 0.5;
    p.s = 4.0 * M_PI;
    for (auto _ : state) {
        auto back = trace_with_tangent(p, field, 0.0, opt);
        benchmark::DoNotOptimize(back);
    }
}
BENCHMARK(BM_trace_backward);

} // namespace

BENCHMARK_MAIN();
