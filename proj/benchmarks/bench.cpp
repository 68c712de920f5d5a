#include "om/cone.hpp"
#include "om/membrane.hpp"
#include "om/metric.hpp"
#include "om/solver.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace om;

namespace {

struct Instance {
    Grid grid;
    PairSet pairs;
    DiscreteLoad load;
    ConicProgram prog;
};

Instance center_instance(double h) {
    Domain d = Domain::unit_square();
    Grid g = build_grid(d, h, BoundarySubset::whole_boundary(d));
    PairSet pairs = build_pairs(g, PairRule::full());
    LoadSpec spec;
    spec.points.push_back({{0, 0}, 1.0});
    DiscreteLoad load = discretize_load(g, spec);
    ConicProgram prog = assemble(g, pairs, load);
    return {std::move(g), std::move(pairs), std::move(load), std::move(prog)};
}

} // namespace

static void BM_ProjectRotatedCone(benchmark::State& state) {
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> U(-2, 2);
    std::vector<RotatedConePoint> pts(1024);
    for (auto& p : pts) p = {U(rng), U(rng), U(rng)};
    std::size_t i = 0;
    for (auto _ : state) {
        RotatedConePoint q = project_rotated_cone(pts[i++ & 1023]);
        benchmark::DoNotOptimize(q);
    }
}
BENCHMARK(BM_ProjectRotatedCone);

static void BM_SparseMultiply(benchmark::State& state) {
    Instance inst = center_instance(1.0 / state.range(0));
    std::vector<double> x(inst.prog.vars(), 1.0), y(inst.prog.A.rows);
    for (auto _ : state) {
        inst.prog.A.multiply(x.data(), y.data());
        benchmark::DoNotOptimize(y.data());
    }
    state.SetItemsProcessed(state.iterations() * inst.prog.A.nnz());
}
BENCHMARK(BM_SparseMultiply)->Arg(4)->Arg(8)->Arg(16);

static void BM_SolveCenter(benchmark::State& state) {
    Instance inst = center_instance(1.0 / state.range(0));
    SolveOptions opts;
    opts.gap_tol = 1e-4;
    opts.feas_tol = 1e-5;
    for (auto _ : state) {
        SolveResult r = solve(inst.prog, opts);
        benchmark::DoNotOptimize(r.report.primal_objective);
    }
}
BENCHMARK(BM_SolveCenter)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_Dijkstra(benchmark::State& state) {
    Domain d = Domain::unit_square();
    Grid g = build_grid(d, 1.0 / state.range(0), BoundarySubset::whole_boundary(d));
    PairSet edges = build_pairs(g, PairRule::within_radius(3.0 / state.range(0)));
    MetricGraph mg = MetricGraph::from_v(g, edges, g.nodes);
    for (auto _ : state) {
        std::vector<double> dist = c_v_distance(mg, 0);
        benchmark::DoNotOptimize(dist.data());
    }
}
BENCHMARK(BM_Dijkstra)->Arg(16)->Arg(40)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
