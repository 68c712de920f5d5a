#include "om/fmd.hpp"

#include <algorithm>
#include <cmath>

namespace om {

namespace {

Vec2 closest_on_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
    Vec2 d = b - a;
    double len2 = d.norm2();
    if (len2 == 0.0) return a;
    double t = std::clamp(dot(p - a, d) / len2, 0.0, 1.0);
    return a + d * t;
}

// Convex-hull membership with tolerance: x within tol of co(points).
bool in_convex_hull(const Vec2& x, std::vector<Vec2> pts, double tol) {
    if (pts.empty()) return false;
    if (pts.size() == 1) return distance(x, pts[0]) <= tol;
    if (pts.size() == 2) return detail::point_segment_distance(x, pts[0], pts[1]) <= tol;
    // Andrew monotone chain.
    std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    });
    std::vector<Vec2> hull;
    for (int phase = 0; phase < 2; ++phase) {
        std::size_t start = hull.size();
        for (const Vec2& p : pts) {
            while (hull.size() >= start + 2 &&
                   cross(hull[hull.size() - 1] - hull[hull.size() - 2],
                         p - hull[hull.size() - 2]) <= 0.0)
                hull.pop_back();
            hull.push_back(p);
        }
        hull.pop_back();
        std::reverse(pts.begin(), pts.end());
    }
    if (hull.size() < 3) {
        double best = 1e300;
        for (std::size_t i = 0; i < hull.size(); ++i)
            for (std::size_t j = i + 1; j < hull.size(); ++j)
                best = std::min(best, detail::point_segment_distance(x, hull[i], hull[j]));
        if (hull.size() == 1) best = distance(x, hull[0]);
        return best <= tol;
    }
    const std::size_t m = hull.size();
    for (std::size_t i = 0; i < m; ++i) {
        Vec2 a = hull[i], b = hull[(i + 1) % m];
        Vec2 e = b - a;
        double en = e.norm();
        if (en == 0.0) continue;
        Vec2 inward{-e.y / en, e.x / en};
        if (dot(x - a, inward) < -tol) return false;
    }
    return true;
}

} // namespace

BoundaryProjection project_sigma0(const Domain& domain, const BoundarySubset& sigma0,
                                  const Vec2& x) {
    if (sigma0.empty()) throw Error("project_sigma0: empty sigma0");
    const double tol = 1e-10 * domain.diameter();

    BoundaryProjection out;
    out.point = x;
    std::vector<Vec2> candidates;
    for (const auto& s : sigma0.segments) candidates.push_back(closest_on_segment(x, s[0], s[1]));
    for (const auto& p : sigma0.points) candidates.push_back(p);

    double best = 1e300;
    for (const auto& c : candidates) best = std::min(best, distance(x, c));
    out.distance = best;
    for (const auto& c : candidates) {
        if (distance(x, c) > best + tol) continue;
        bool dup = false;
        for (const auto& q : out.projections)
            if (distance(q, c) <= tol) dup = true;
        if (!dup) out.projections.push_back(c);
    }
    return out;
}

double FmdSolution::trace_mass() const {
    static const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    double s = 0.0;
    for (const auto& r : rays) s += r.mass * distance(r.from, r.to) * inv_sqrt2;
    return s;
}

FmdSolution solve_fmd(const Grid& grid, const DiscreteLoad& load) {
    if (!load.nonnegative())
        throw Error("solve_fmd: the load must be a non-negative measure");
    FmdSolution out;
    const double sqrt2 = std::sqrt(2.0);
    for (int i = 0; i < grid.size(); ++i) {
        double w = load.weights[i];
        if (w == 0.0) continue;
        BoundaryProjection bp = project_sigma0(grid.domain, grid.sigma0, grid.nodes[i]);
        out.Z += sqrt2 * w * bp.distance;
        double share = w / static_cast<double>(bp.projections.size());
        for (const auto& p : bp.projections) out.rays.push_back({grid.nodes[i], p, share});
    }
    return out;
}

bool ridge_membership(const Domain& domain, const BoundarySubset& sigma0, const Vec2& x) {
    const double tol = 1e-9 * domain.diameter();
    if (!domain.contains(x, tol)) throw Error("ridge_membership: point outside the domain");
    if (sigma0.contains(x, tol)) throw Error("ridge_membership: point lies on sigma0");
    BoundaryProjection bp = project_sigma0(domain, sigma0, x);
    return in_convex_hull(x, bp.projections, tol);
}

FmdCompareResult compare_fmd_om(const Grid& grid, const DiscreteLoad& load,
                                const SolveOmOptions& opts) {
    FmdCompareResult out;
    FmdSolution fmd = solve_fmd(grid, load);
    MembraneSolution om = solve_om(grid, load, opts);
    out.Z_fmd = fmd.Z;
    out.Z0_om = om.Z0;
    out.equal = std::abs(om.Z0 - fmd.Z) <= 10.0 * om.gap_tol * (1.0 + std::abs(om.Z0));
    for (int i = 0; i < grid.size(); ++i) {
        if (load.weights[i] == 0.0) continue;
        out.ridge.push_back(
            {grid.nodes[i], ridge_membership(grid.domain, grid.sigma0, grid.nodes[i])});
    }
    return out;
}

} // namespace om
