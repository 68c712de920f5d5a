#include "om/fmd.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace om;

namespace {

Domain square() { return Domain::unit_square(); }
BoundarySubset whole(const Domain& d) { return BoundarySubset::whole_boundary(d); }

} // namespace

TEST_CASE("boundary projections on the square") {
    Domain d = square();
    BoundarySubset s = whole(d);

    BoundaryProjection p = project_sigma0(d, s, {0.2, 0.0});
    CHECK(p.distance == doctest::Approx(0.3));
    REQUIRE(p.projections.size() == 1);
    CHECK(p.projections[0].x == doctest::Approx(0.5));
    CHECK(p.projections[0].y == doctest::Approx(0.0));

    BoundaryProjection c = project_sigma0(d, s, {0.0, 0.0});
    CHECK(c.distance == doctest::Approx(0.5));
    CHECK(c.projections.size() == 4);

    BoundarySubset right = BoundarySubset::edges(d, {1});
    BoundaryProjection r = project_sigma0(d, right, {0.0, 0.0});
    CHECK(r.distance == doctest::Approx(0.5));
    REQUIRE(r.projections.size() == 1);
    CHECK(r.projections[0].x == doctest::Approx(0.5));
}

TEST_CASE("fmd value for an offset point load is exact") {
    Domain d = square();
    Grid g = build_grid(d, 0.05, whole(d));
    LoadSpec spec;
    spec.points.push_back({{0.2, 0.0}, 1.0});
    DiscreteLoad load = discretize_load(g, spec);
    FmdSolution fmd = solve_fmd(g, load);
    CHECK(fmd.Z == doctest::Approx(std::sqrt(2.0) * 0.3).epsilon(1e-12));
    REQUIRE(fmd.rays.size() == 1);
    CHECK(fmd.rays[0].to.x == doctest::Approx(0.5));
    CHECK(fmd.trace_mass() == doctest::Approx(0.5 * fmd.Z).epsilon(1e-12));
}

TEST_CASE("fmd distributes center-load rays over the four ties") {
    Domain d = square();
    Grid g = build_grid(d, 0.25, whole(d));
    LoadSpec spec;
    spec.points.push_back({{0, 0}, 1.0});
    DiscreteLoad load = discretize_load(g, spec);
    FmdSolution fmd = solve_fmd(g, load);
    CHECK(fmd.Z == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-12));
    REQUIRE(fmd.rays.size() == 4);
    for (const auto& r : fmd.rays) CHECK(r.mass == doctest::Approx(0.25));
    CHECK(fmd.trace_mass() == doctest::Approx(0.5 * fmd.Z).epsilon(1e-12));
}

TEST_CASE("uniform-load fmd approaches the layer-cake value") {
    Domain d = square();
    Grid g = build_grid(d, 0.025, whole(d));
    LoadSpec spec;
    spec.density = 1.0;
    DiscreteLoad load = discretize_load(g, spec);
    FmdSolution fmd = solve_fmd(g, load);
    double exact = std::sqrt(2.0) / 6.0;
    CHECK(std::abs(fmd.Z - exact) / exact <= 0.01);
}

TEST_CASE("signed loads are rejected") {
    Domain d = square();
    Grid g = build_grid(d, 0.25, whole(d));
    LoadSpec spec;
    spec.points.push_back({{0, 0}, 1.0});
    spec.points.push_back({{0.25, 0.0}, -0.5});
    DiscreteLoad load = discretize_load(g, spec);
    CHECK_THROWS_AS(solve_fmd(g, load), Error);
}

TEST_CASE("ridge membership") {
    Domain d = square();
    BoundarySubset s = whole(d);
    CHECK(ridge_membership(d, s, {0.0, 0.0}));
    CHECK(!ridge_membership(d, s, {0.2, 0.0}));
    CHECK_THROWS_AS(ridge_membership(d, s, {0.5, 0.0}), Error);

    // Rectangle |x| < 1/2, |y| < 1: high ridge is {x = 0, |y| <= 1/2}.
    Domain rect = Domain::rectangle(1.0, 2.0);
    BoundarySubset rs = whole(rect);
    CHECK(ridge_membership(rect, rs, {0.0, 0.5 - 1e-6}));
    CHECK(ridge_membership(rect, rs, {0.0, -0.25}));
    CHECK(!ridge_membership(rect, rs, {0.1, 0.0}));
}

TEST_CASE("ridge membership respects the square symmetries") {
    Domain d = square();
    BoundarySubset s = whole(d);
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> U(-0.45, 0.45);
    for (int trial = 0; trial < 200; ++trial) {
        Vec2 p{U(rng), U(rng)};
        bool base = ridge_membership(d, s, p);
        Vec2 images[] = {{-p.x, p.y}, {p.x, -p.y}, {-p.x, -p.y},
                         {p.y, p.x},  {-p.y, p.x}, {p.y, -p.x}, {-p.y, -p.x}};
        for (const auto& q : images) CHECK(ridge_membership(d, s, q) == base);
    }
}

TEST_CASE("compare: center load makes FMD and OM agree") {
    Domain d = square();
    Grid g = build_grid(d, 0.125, whole(d));
    LoadSpec spec;
    spec.points.push_back({{0, 0}, 1.0});
    DiscreteLoad load = discretize_load(g, spec);
    FmdCompareResult cmp = compare_fmd_om(g, load, {});
    CHECK(cmp.equal);
    CHECK(cmp.Z_fmd == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-12));
    CHECK(cmp.Z0_om == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-4));
    REQUIRE(cmp.ridge.size() == 1);
    CHECK(cmp.ridge[0].second);
}

TEST_CASE("compare: off-ridge load separates the two problems") {
    Domain d = square();
    Grid g = build_grid(d, 0.1, whole(d));
    LoadSpec spec;
    spec.points.push_back({{0.2, 0.0}, 1.0});
    DiscreteLoad load = discretize_load(g, spec);
    SolveOmOptions opts;
    opts.column_generation = true;
    FmdCompareResult cmp = compare_fmd_om(g, load, opts);
    CHECK(!cmp.equal);
    CHECK(cmp.Z_fmd == doctest::Approx(std::sqrt(2.0) * 0.3).epsilon(1e-12));
    CHECK(cmp.Z0_om == doctest::Approx(std::sqrt(0.42)).epsilon(2e-3));
    CHECK(cmp.Z_fmd <= cmp.Z0_om + 1e-9);
    REQUIRE(cmp.ridge.size() == 1);
    CHECK(!cmp.ridge[0].second);
}

TEST_CASE("zero load gives zero in both problems") {
    Domain d = square();
    Grid g = build_grid(d, 0.5, whole(d));
    DiscreteLoad load;
    load.weights.assign(g.size(), 0.0);
    FmdCompareResult cmp = compare_fmd_om(g, load, {});
    CHECK(cmp.Z_fmd == 0.0);
    CHECK(cmp.Z0_om == 0.0);
    CHECK(cmp.equal);
}

TEST_CASE("fmd lower bound for nonnegative loads") {
    Domain d = square();
    Grid g = build_grid(d, 0.25, whole(d));
    LoadSpec spec;
    spec.points.push_back({{0.25, 0.25}, 1.0});
    spec.points.push_back({{-0.25, 0.0}, 0.5});
    DiscreteLoad load = discretize_load(g, spec);
    FmdSolution fmd = solve_fmd(g, load);
    MembraneSolution sol = solve_om(g, load, {});
    CHECK(fmd.Z <= sol.Z0 + 10.0 * sol.gap_tol * (1.0 + sol.Z0));
}
