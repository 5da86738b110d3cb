#include <benchmark/benchmark.h>

#include "multipath/field.hpp"
#include "multipath/merge.hpp"
#include "multipath/network.hpp"
#include "multipath/riemann.hpp"
#include "multipath/scheme.hpp"

#include <random>

using namespace multipath;

namespace {

NetworkGrid merge_grid(double dx) {
    Network net;
    net.nodes = {"n1", "n2", "n3", "n4"};
    net.arcs = {{"a1", "n1", "n3", 1.0}, {"a2", "n2", "n3", 1.0}, {"a3", "n3", "n4", 1.0}};
    std::vector<Path> paths = {{1, {"a1", "a3"}}, {2, {"a2", "a3"}}};
    return NetworkGrid::build(net, paths, dx);
}

DensityField merge_boundaries(const NetworkGrid& grid, double ul, double vl, double b1, double b2) {
    DensityField f = DensityField::zeros(grid);
    f.left[0] = BoundaryCondition::dirichlet(ul);
    f.left[1] = BoundaryCondition::dirichlet(vl);
    f.right[0] = BoundaryCondition::dirichlet(b1);
    f.right[1] = BoundaryCondition::dirichlet(b2);
    return f;
}

void BM_GodunovFlux(benchmark::State& state) {
    FluxModel f = FluxModel::quadratic();
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::vector<double> pairs(2048);
    for (double& v : pairs) v = uni(rng);
    std::size_t i = 0;
    for (auto _ : state) {
        double g = f.godunov(pairs[i % 2048], pairs[(i + 1) % 2048]);
        benchmark::DoNotOptimize(g);
        ++i;
    }
}
BENCHMARK(BM_GodunovFlux);

void BM_MergeStep(benchmark::State& state) {
    // One full update of the reference merge grid; cells/iteration reported.
    NetworkGrid grid = merge_grid(1.0 / state.range(0));
    FluxModel f = FluxModel::quadratic();
    SchemeConfig cfg;
    cfg.admissibility = SchemeConfig::Admissibility::off;
    Simulator sim(grid, f, cfg);
    SimState st = sim.make_state(merge_boundaries(grid, 0.1, 0.15, 0.3, 0.3));
    for (auto _ : state)
        sim.step(st);
    state.SetItemsProcessed(state.iterations() *
                            (grid.cell_count(0) + grid.cell_count(1)));
}
BENCHMARK(BM_MergeStep)->Arg(25)->Arg(100)->Arg(400);

void BM_SteadyMerge(benchmark::State& state) {
    NetworkGrid grid = merge_grid(0.04);
    FluxModel f = FluxModel::quadratic();
    SchemeConfig cfg;
    cfg.steady_tolerance = 1e-12;
    Simulator sim(grid, f, cfg);
    for (auto _ : state) {
        SimState st = sim.make_state(merge_boundaries(grid, 0.1, 0.15, 0.3, 0.3));
        SteadyResult r = sim.run_to_steady(st);
        benchmark::DoNotOptimize(r.steps);
    }
}
BENCHMARK(BM_SteadyMerge)->Unit(benchmark::kMillisecond);

void BM_StationaryMerge(benchmark::State& state) {
    FluxModel f = FluxModel::quadratic();
    for (auto _ : state) {
        StationaryMergeSolution s = stationary_merge(f, {0.2, 0.3, 0.8});
        benchmark::DoNotOptimize(s.omega_junction);
    }
}
BENCHMARK(BM_StationaryMerge);

void BM_MergeRiemann(benchmark::State& state) {
    FluxModel f = FluxModel::quadratic();
    for (auto _ : state) {
        MergeRiemannSolution s = solve_merge_riemann(f, 0.3, 0.1, 0.6);
        benchmark::DoNotOptimize(s.z_bar);
    }
}
BENCHMARK(BM_MergeRiemann);

} // namespace

BENCHMARK_MAIN();
