#pragma once

#include "om/membrane.hpp"

#include <functional>

namespace om {

// Radial load on a disk of radius R, described by its repartition function
// F(t) = mass inside {|x| <= t}.
struct RadialLoad {
    double center_atom = 0.0;                   // point mass at the origin
    std::function<double(double)> density;      // radial area density f(r), may be empty
    std::function<double(double)> repartition;  // exact F(t) hook; computed if empty

    static RadialLoad uniform(double value = 1.0);
    static RadialLoad center_dirac(double mass = 1.0);
};

struct RadialSolution {
    double R = 0.0;
    double D = 0.0;     // stress intensity constant
    double Z0 = 0.0;    // <f, u>
    std::function<double(double)> F;
    double u(double r) const;
    double w(double r) const;
    double alpha(double r) const { return D / r; }
    double u_prime(double r) const;
    double w_prime(double r) const;

    // max |u'^2/2 + w' - 1| over `samples` interior points.
    double radial_identity_residual(int samples = 1000) const;

private:
    friend RadialSolution radial(double, const RadialLoad&);
    double inv_2piD = 0.0;
    double inv_8pi2D2 = 0.0;
    std::function<double(double)> int_F;  // antiderivative of F from 0
    std::function<double(double)> int_F2; // antiderivative of F^2 from 0
};

RadialSolution radial(double R, const RadialLoad& load);

// One-force domains: a disk of radius R0 or a rectangle width x height
// (square when width == height), Dirichlet condition on the whole boundary.
struct OneForceDomain {
    enum class Kind { Disk, Rectangle };
    Kind kind = Kind::Disk;
    double R0 = 1.0;
    double width = 1.0, height = 1.0;

    static OneForceDomain disk(double R0) { return {Kind::Disk, R0, 0.0, 0.0}; }
    static OneForceDomain rectangle(double w, double h) {
        return {Kind::Rectangle, 0.0, w, h};
    }
    static OneForceDomain square(double side) { return rectangle(side, side); }
};

struct OneForceSolution {
    Vec2 x0, y0;
    double d0 = 0.0;
    double R0 = 0.0;     // d(y0, boundary)
    double energy = 0.0; // sqrt(2) d0
    struct Attachment {
        Vec2 point;   // boundary attachment
        double weight; // rho mass
        double Pi;
        double pi;
        double alpha;
    };
    std::vector<Attachment> attachments;

    double u(const Vec2& x) const;
    Vec2 w(const Vec2& x) const;

    // Materializes the closed form on a grid whose nodes contain x0 and the
    // attachment points; pairs must contain the corresponding strings.
    MembraneSolution to_solution(const Grid& grid, const PairSet& pairs) const;
};

OneForceSolution one_force(const OneForceDomain& domain, const Vec2& x0);

// Adaptive Simpson quadrature used by the radial oracle.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12);

} // namespace om
