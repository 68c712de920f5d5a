#pragma once

#include "om/membrane.hpp"

namespace om {

struct BoundaryProjection {
    Vec2 point;
    double distance = 0.0;
    std::vector<Vec2> projections; // nearest points on sigma0, ties included
};

struct TransportRay {
    Vec2 from;   // loaded point
    Vec2 to;     // boundary projection
    double mass; // gamma weight
};

struct FmdSolution {
    double Z = 0.0;
    std::vector<TransportRay> rays;
    // sum over rays of mass * |from - to| / sqrt(2); equals Z/2.
    double trace_mass() const;
};

struct FmdCompareResult {
    double Z_fmd = 0.0;
    double Z0_om = 0.0;
    bool equal = false;
    std::vector<std::pair<Vec2, bool>> ridge; // per support point of the load
};

BoundaryProjection project_sigma0(const Domain& domain, const BoundarySubset& sigma0,
                                  const Vec2& x);

FmdSolution solve_fmd(const Grid& grid, const DiscreteLoad& load);

bool ridge_membership(const Domain& domain, const BoundarySubset& sigma0, const Vec2& x);

FmdCompareResult compare_fmd_om(const Grid& grid, const DiscreteLoad& load,
                                const SolveOmOptions& opts = {});

} // namespace om
