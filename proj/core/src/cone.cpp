#include "om/cone.hpp"

#include <cmath>
#include <limits>

namespace om {

double rho_plus(const Mat2& a) {
    double lo, hi;
    a.eigenvalues(lo, hi);
    return std::max(hi, 0.0);
}

double chi_c_star(const Vec2& theta, const Mat2& s) {
    const double inf = std::numeric_limits<double>::infinity();
    double lo, hi;
    s.eigenvalues(lo, hi);
    double scale = std::max(std::abs(lo), std::abs(hi));
    if (lo < -1e-14 * std::max(1.0, scale)) return inf;

    // Pseudo-inverse via the eigen frame; range test on the residual.
    // Eigenvector for hi: rows of (S - lo*Id) span it when the gap is nonzero.
    Vec2 q;
    if (hi <= 0.0) {
        // S ~ 0: support value is finite only at theta = 0.
        q = {0.0, 0.0};
    } else if (lo / hi > 1e-14) {
        // Full rank: solve directly.
        double det = s.det();
        q = {(s.yy * theta.x - s.xy * theta.y) / det,
             (-s.xy * theta.x + s.xx * theta.y) / det};
    } else {
        // Numerically rank one: project theta on the top eigenvector.
        Vec2 e;
        if (std::abs(s.xx - lo) >= std::abs(s.yy - lo))
            e = {s.xx - lo, s.xy};
        else
            e = {s.xy, s.yy - lo};
        double en = e.norm();
        if (en == 0.0) {
            q = {0.0, 0.0};
        } else {
            e = e / en;
            q = e * (dot(e, theta) / hi);
        }
    }
    Vec2 residual = s.apply(q) - theta;
    if (residual.norm() > 1e-10 * std::max(theta.norm(), 1e-300)) return inf;
    return s.trace() + 0.5 * dot(q, theta);
}

RotatedConePoint project_rotated_cone(const RotatedConePoint& p) {
    if (!std::isfinite(p.u) || !std::isfinite(p.v) || !std::isfinite(p.x))
        throw Error("cone projection: non-finite input");
    static const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    // Rotate (u,v) -> (s,t); the cone becomes the standard Lorentz cone
    // {(s,t,x) : sqrt(t^2 + x^2) <= s}.
    double s = (p.u + p.v) * inv_sqrt2;
    double t = (p.u - p.v) * inv_sqrt2;
    double r = std::sqrt(t * t + p.x * p.x);
    double ps, pt, px;
    if (r <= s) {
        return p;
    } else if (r <= -s) {
        ps = pt = px = 0.0;
    } else {
        double alpha = 0.5 * (s + r);
        ps = alpha;
        pt = r > 0.0 ? alpha * t / r : 0.0;
        px = r > 0.0 ? alpha * p.x / r : 0.0;
    }
    return {(ps + pt) * inv_sqrt2, (ps - pt) * inv_sqrt2, px};
}

} // namespace om
