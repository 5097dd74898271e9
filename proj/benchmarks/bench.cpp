// Microbenchmarks for the hot paths: the solver's objective/gradient sweep,
// the reported-energy quadrature, field sampling, the excess routes, and a
// small warm-started solve end to end.

#include <benchmark/benchmark.h>

#include "vlab/boundary.hpp"
#include "vlab/diagnostics.hpp"
#include "vlab/energy.hpp"
#include "vlab/exact.hpp"
#include "vlab/excess.hpp"
#include "vlab/mesh.hpp"
#include "vlab/solve.hpp"
#include "vlab/thinfilm.hpp"

#include <vector>

namespace {

using namespace vlab;

Field2D make_field(int n_r, double eps) {
    PolarMesh mesh(n_r, 2 * n_r, 1);
    return sample_field(mesh, BlaschkeMinimizer({cplx(0.0, 0.0)}, 0.0, eps));
}

void BM_ValueAndGradient(benchmark::State& state) {
    const int n_r = static_cast<int>(state.range(0));
    const Field2D f = make_field(n_r, 0.3);
    const QuadratureScheme scheme(f.mesh, f.eps, 1);
    std::vector<cplx> grad;
    for (auto _ : state)
        benchmark::DoNotOptimize(scheme.value_and_gradient(f, grad));
    state.SetItemsProcessed(state.iterations() * f.values.size());
}
BENCHMARK(BM_ValueAndGradient)->Arg(64)->Arg(128);

void BM_EnergyReport(benchmark::State& state) {
    const int n_r = static_cast<int>(state.range(0));
    const Field2D f = make_field(n_r, 0.3);
    for (auto _ : state)
        benchmark::DoNotOptimize(energy_report(f));
    state.SetItemsProcessed(state.iterations() * f.values.size());
}
BENCHMARK(BM_EnergyReport)->Arg(64)->Arg(128);

void BM_SampleBlaschke(benchmark::State& state) {
    const int n_r = static_cast<int>(state.range(0));
    PolarMesh mesh(n_r, 2 * n_r, 2);
    const BlaschkeMinimizer exact({cplx(0.3, 0.0), cplx(0.0, -0.4)}, 0.0, 0.3);
    for (auto _ : state)
        benchmark::DoNotOptimize(sample_field(mesh, exact));
    state.SetItemsProcessed(state.iterations() * mesh.size());
}
BENCHMARK(BM_SampleBlaschke)->Arg(64)->Arg(128);

void BM_ExcessDirect(benchmark::State& state) {
    const BoundaryMap g{1, {0.0, 0.3}, {0.1}, 0.0};
    const std::vector<cplx> zeros{cplx(0.2, 0.1)};
    const int modes = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(excess_direct(g, zeros, modes));
}
BENCHMARK(BM_ExcessDirect)->Arg(1024)->Arg(2048);

void BM_ExcessFormula(benchmark::State& state) {
    const BoundaryMap g{1, {0.0, 0.3}, {0.1}, 0.0};
    const std::vector<cplx> zeros{cplx(0.2, 0.1)};
    for (auto _ : state)
        benchmark::DoNotOptimize(excess_via_formula(g, zeros));
}
BENCHMARK(BM_ExcessFormula);

void BM_IdentityResiduals(benchmark::State& state) {
    const Field2D f = make_field(96, 0.3);
    for (auto _ : state)
        benchmark::DoNotOptimize(identity_residuals(f));
}
BENCHMARK(BM_IdentityResiduals);

void BM_SolveWarm(benchmark::State& state) {
    PolarMesh mesh(32, 64, 1);
    const BoundaryMap g = blaschke_boundary(std::vector<cplx>{cplx(0.0, 0.0)}, 0.0);
    SolverConfig cfg;
    cfg.gradient_tol = 1e-6;
    for (auto _ : state) {
        const MinimizeResult res = minimize(g, 0.4, mesh, InitPreset::nearest_exact, cfg);
        benchmark::DoNotOptimize(res.breakdown.total);
    }
}
BENCHMARK(BM_SolveWarm)->Unit(benchmark::kMillisecond);

void BM_ThinFilmEnergy(benchmark::State& state) {
    PolarMesh mesh(48, 96, 1);
    const Field2D planar = sample_field(mesh, BlaschkeMinimizer({cplx(0.0, 0.0)}, 0.0, 0.3));
    const Field3D stack = lift_planar(planar, 0.2, 6);
    for (auto _ : state)
        benchmark::DoNotOptimize(thin_film_energy(stack));
}
BENCHMARK(BM_ThinFilmEnergy);

} // namespace

BENCHMARK_MAIN();
