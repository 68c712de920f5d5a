#pragma once

#include "om/common.hpp"

namespace om {

// Point of the rotated quadratic cone {(u,v,x) : u,v >= 0, x^2 <= 2uv},
// the conic lift of the quadratic-over-linear transport cost.
struct RotatedConePoint {
    double u = 0.0;
    double v = 0.0;
    double x = 0.0;

    bool is_member(double scale = 1.0) const {
        double tol = 1e-12 * std::max(1.0, scale);
        return u >= -tol && v >= -tol && x * x <= 2.0 * u * v + tol;
    }
};

// Positive part of the largest eigenvalue of a symmetric 2x2 matrix.
double rho_plus(const Mat2& a);

// Support function of {(z,M) : z (x) z / 2 + M <= Id}; +inf encoded as infinity().
double chi_c_star(const Vec2& theta, const Mat2& s);

// Euclidean projection onto the rotated quadratic cone, exact closed form.
RotatedConePoint project_rotated_cone(const RotatedConePoint& p);

} // namespace om
