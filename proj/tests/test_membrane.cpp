#include "om/membrane.hpp"

#include "om/oracle.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

using namespace om;

namespace {

Grid center_grid(double h) {
    Domain d = Domain::unit_square();
    return build_grid(d, h, BoundarySubset::whole_boundary(d));
}

DiscreteLoad center_load(const Grid& g) {
    LoadSpec spec;
    spec.points.push_back({{0, 0}, 1.0});
    return discretize_load(g, spec);
}

} // namespace

TEST_CASE("solve_om reaches the closed-form center value") {
    Grid g = center_grid(0.25);
    DiscreteLoad load = center_load(g);
    SolveOmOptions opts;
    MembraneSolution sol = solve_om(g, load, opts);
    CHECK(sol.Z0 == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-4));
    CHECK(std::abs(sol.Z0 - sol.dual_value) <= sol.gap_tol * (1.0 + std::abs(sol.Z0)));
    CHECK(sol.report.optimal());
    CHECK(sol.warnings.empty());
}

TEST_CASE("column generation matches the full-pair solve and brackets the value") {
    Grid g = center_grid(0.125);
    DiscreteLoad load = center_load(g);

    SolveOmOptions full;
    full.column_generation = false;
    MembraneSolution ref = solve_om(g, load, full);

    SolveOmOptions cg;
    cg.column_generation = true;
    MembraneSolution sol = solve_om(g, load, cg);

    CHECK(sol.Z0 == doctest::Approx(ref.Z0).epsilon(1e-5));
    CHECK(sol.rounds >= 1);
    REQUIRE(!sol.round_lower.empty());
    // Upper bounds shrink, certified lower bounds grow (up to solver noise).
    const double slack = 10.0 * sol.gap_tol * (1.0 + std::abs(sol.Z0));
    for (std::size_t r = 1; r < sol.round_upper.size(); ++r) {
        CHECK(sol.round_upper[r] <= sol.round_upper[r - 1] + slack);
        CHECK(sol.round_lower[r] >= sol.round_lower[r - 1] - slack);
    }
    CHECK(sol.Z0 - sol.dual_value <= sol.gap_tol * (1.0 + std::abs(sol.Z0)));
    // The final assignment is feasible for every grid pair.
    OptimalityRecord rec = check_optimality(sol);
    CHECK(rec.two_point <= 1e-12);
}

TEST_CASE("equi-repartition holds on returned solutions") {
    Grid g = center_grid(0.25);
    MembraneSolution sol = solve_om(g, center_load(g), {});
    CHECK(std::abs(sol.length_mass - sol.transport_mass) <=
          10.0 * sol.gap_tol * std::abs(sol.Z0));
    CHECK(sol.length_mass == doctest::Approx(0.5 * sol.Z0).epsilon(1e-3));
}

TEST_CASE("a priori bounds of feasible assignments hold for solver output") {
    Grid g = center_grid(0.25);
    MembraneSolution sol = solve_om(g, center_load(g), {});
    const double R = g.domain.diameter();
    for (const auto& w : sol.w) CHECK(w.norm() <= R + 1e-9);
    for (int i = 0; i < g.size(); ++i)
        for (int j = i + 1; j < g.size(); ++j) {
            double len = distance(g.nodes[i], g.nodes[j]);
            CHECK(std::abs(sol.u[j] - sol.u[i]) <= std::sqrt(2.0 * R * len) + 1e-9);
        }
}

TEST_CASE("energy_J closed forms") {
    Grid g = center_grid(0.5);
    PairSet pairs = build_pairs(g, PairRule::full());
    // One string of length 1: nodes (-1/2,0) and (1/2,0).
    int a = g.find_node({-0.5, 0}, 1e-12), b = g.find_node({0.5, 0}, 1e-12);
    int pair = -1;
    for (int e = 0; e < pairs.size(); ++e)
        if (pairs.a[e] == std::min(a, b) && pairs.b[e] == std::max(a, b)) pair = e;
    REQUIRE(pair >= 0);

    TrussMeasure truss;
    truss.entries.push_back({pair, 1.0, std::sqrt(2.0), std::sqrt(2.0)});
    truss.max_Pi = 1.0;
    CHECK(energy_J(truss, pairs) == doctest::Approx(2.0));

    TrussMeasure zero_pi;
    zero_pi.entries.push_back({pair, 0.7, 0.0, 0.0});
    zero_pi.max_Pi = 0.7;
    CHECK(energy_J(zero_pi, pairs) == doctest::Approx(0.7 * pairs.length[pair]));

    TrussMeasure bad;
    bad.entries.push_back({pair, 0.0, 1.0, std::nullopt});
    CHECK(energy_J(bad, pairs) == std::numeric_limits<double>::infinity());
}

TEST_CASE("check_optimality validates the one-force oracle and flags breakage") {
    Grid g = center_grid(0.25);
    PairSet pairs = build_pairs(g, PairRule::full());
    OneForceSolution of = one_force(OneForceDomain::square(1.0), {0, 0});
    MembraneSolution sol = of.to_solution(g, pairs);
    OptimalityRecord rec = check_optimality(sol);
    CHECK(rec.pass(1e-10));

    MembraneSolution scaled = sol;
    for (double& u : scaled.u) u *= 1.1;
    OptimalityRecord broken = check_optimality(scaled);
    CHECK(broken.two_point > 1e-6);

    MembraneSolution empty = sol;
    std::fill(empty.pi.begin(), empty.pi.end(), 0.0);
    std::fill(empty.Pi.begin(), empty.Pi.end(), 0.0);
    empty.truss.entries.clear();
    OptimalityRecord nofl = check_optimality(empty);
    CHECK(nofl.admissibility == doctest::Approx(1.0)); // max |f_h|
}

TEST_CASE("compliance scaling") {
    CHECK(compliance_at_mass(std::sqrt(2.0) / 2.0, 1.0) == doctest::Approx(1.0 / 16.0));
    CHECK(compliance_at_mass(0.0, 2.0) == 0.0);
    for (double z : {0.3, 1.7}) {
        double m = 0.8;
        CHECK(compliance_at_mass(z, 2.0 * m) ==
              doctest::Approx(compliance_at_mass(z, m) / 2.0));
    }
    CHECK_THROWS_AS(compliance_at_mass(1.0, 0.0), Error);
}

TEST_CASE("rasterize a single horizontal string") {
    Grid g = center_grid(0.25);
    PairSet pairs = build_pairs(g, PairRule::full());
    int a = g.find_node({-0.5, 0}, 1e-12), b = g.find_node({0.5, 0}, 1e-12);
    int pair = -1;
    for (int e = 0; e < pairs.size(); ++e)
        if (pairs.a[e] == std::min(a, b) && pairs.b[e] == std::max(a, b)) pair = e;
    REQUIRE(pair >= 0);

    MembraneSolution sol;
    sol.grid = g;
    sol.active_pairs = pairs;
    sol.load_weights.assign(g.size(), 0.0);
    sol.u.assign(g.size(), 0.0);
    sol.w.assign(g.size(), Vec2{});
    sol.t.assign(pairs.size(), 0.0);
    sol.Pi.assign(pairs.size(), 0.0);
    sol.pi.assign(pairs.size(), 0.0);
    sol.truss.entries.push_back({pair, 2.0, 1.0, 0.5});
    sol.truss.max_Pi = 2.0;

    RasterBundle raster = rasterize(sol);
    double total_trace = 0.0;
    for (int i = 0; i < g.size(); ++i) {
        CHECK(raster.sigma[i].xy == 0.0);
        CHECK(raster.sigma[i].yy == 0.0);
        total_trace += raster.sigma[i].trace();
    }
    CHECK(total_trace == doctest::Approx(2.0 * pairs.length[pair]).epsilon(1e-12));
}

TEST_CASE("rasterize conserves trace mass on a solved truss") {
    Grid g = center_grid(0.25);
    MembraneSolution sol = solve_om(g, center_load(g), {});
    RasterBundle raster = rasterize(sol);
    double expected = 0.0;
    for (const auto& te : sol.truss.entries)
        expected += te.Pi * sol.active_pairs.length[te.pair];
    CHECK(raster.trace_mass() == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("rasterize of an empty truss is zero") {
    Grid g = center_grid(0.5);
    MembraneSolution sol;
    sol.grid = g;
    sol.active_pairs = build_pairs(g, PairRule::full());
    RasterBundle raster = rasterize(sol);
    CHECK(raster.trace_mass() == 0.0);
    for (const auto& l : raster.lambda) CHECK(l.norm() == 0.0);
}

TEST_CASE("support pattern fraction on a materialized truss") {
    Grid g = center_grid(0.25);
    PairSet pairs = build_pairs(g, PairRule::full());
    OneForceSolution of = one_force(OneForceDomain::square(1.0), {0, 0});
    MembraneSolution oracle_sol = of.to_solution(g, pairs);
    CHECK(support_pattern_fraction(oracle_sol) == 1.0);

    // Solver optima may subdivide strings at collinear lattice nodes; the raw
    // pair-level probe stays a well-defined fraction, and the string-aligned
    // variant recognizes the subdivided mass.
    MembraneSolution solved = solve_om(g, center_load(g), {});
    double frac = support_pattern_fraction(solved);
    CHECK(frac >= 0.0);
    CHECK(frac <= 1.0);
    CHECK(string_aligned_fraction(solved) >= 0.99);
    CHECK(string_aligned_fraction(oracle_sol) == 1.0);
}

TEST_CASE("partial point Dirichlet zones solve cleanly") {
    Domain d = Domain::unit_square();
    std::vector<Vec2> pins = {{0.25, 0.5},  {-0.25, 0.5},  {0.25, -0.5}, {-0.25, -0.5},
                              {0.5, 0.25},  {-0.5, 0.25},  {0.5, -0.25}, {-0.5, -0.25}};
    Grid g = build_grid(d, 0.125, BoundarySubset::at_points(pins));
    CHECK(g.dirichlet_count() == 8);
    LoadSpec spec;
    spec.density = 1.0;
    DiscreteLoad load = discretize_load(g, spec);
    SolveOmOptions opts;
    opts.column_generation = true;
    opts.solver.gap_tol = 1e-4;
    opts.solver.max_iter = 1000000;
    MembraneSolution sol = solve_om(g, load, opts);
    CHECK(sol.report.optimal());
    CHECK(sol.Z0 > 0.0);
    CHECK(std::abs(sol.Z0 - sol.dual_value) <= sol.gap_tol * (1.0 + sol.Z0));
}

TEST_CASE("solve_om requires a Dirichlet node") {
    Domain d = Domain::unit_square();
    Grid g = build_grid(d, 0.5, BoundarySubset::at_points({Vec2{0.5, 0.5}}));
    for (auto& f : g.dirichlet) f = 0;
    DiscreteLoad load;
    load.weights.assign(g.size(), 0.0);
    CHECK_THROWS_AS(solve_om(g, load, {}), Error);
}
