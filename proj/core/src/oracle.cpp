#include "om/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace om {

namespace {

constexpr double kPi = 3.14159265358979323846;

double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                   double fm, double fb, double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
    if (a == b) return 0.0;
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48);
}

RadialLoad RadialLoad::uniform(double value) {
    RadialLoad l;
    l.density = [value](double) { return value; };
    l.repartition = [value](double t) { return value * kPi * t * t; };
    return l;
}

RadialLoad RadialLoad::center_dirac(double mass) {
    RadialLoad l;
    l.center_atom = mass;
    l.repartition = [mass](double) { return mass; };
    return l;
}

double RadialSolution::u(double r) const { return inv_2piD * (int_F(R) - int_F(r)); }
double RadialSolution::w(double r) const { return r - inv_8pi2D2 * int_F2(r); }
double RadialSolution::u_prime(double r) const { return -F(r) * inv_2piD; }
double RadialSolution::w_prime(double r) const {
    double f = F(r);
    return 1.0 - f * f * inv_8pi2D2;
}

double RadialSolution::radial_identity_residual(int samples) const {
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        double r = (i + 0.5) * R / samples;
        double up = u_prime(r);
        worst = std::max(worst, std::abs(0.5 * up * up + w_prime(r) - 1.0));
    }
    return worst;
}

RadialSolution radial(double R, const RadialLoad& load) {
    if (R <= 0.0) throw Error("radial: radius must be positive");
    RadialSolution sol;
    sol.R = R;

    std::function<double(double)> F = load.repartition;
    if (!F) {
        if (!load.density && load.center_atom == 0.0)
            throw Error("radial: empty load");
        double atom = load.center_atom;
        auto dens = load.density;
        F = [atom, dens](double t) {
            if (!dens) return atom;
            return atom + adaptive_simpson([&](double s) { return dens(s) * 2.0 * kPi * s; },
                                           0.0, t);
        };
    }
    sol.F = F;

    // Exact antiderivative hooks for the canonical loads, quadrature otherwise.
    if (load.repartition && !load.density && load.center_atom > 0.0) {
        double m = load.center_atom;
        sol.int_F = [m](double t) { return m * t; };
        sol.int_F2 = [m](double t) { return m * m * t; };
    } else {
        auto Fc = sol.F;
        sol.int_F = [Fc](double t) { return adaptive_simpson(Fc, 0.0, t); };
        sol.int_F2 = [Fc](double t) {
            return adaptive_simpson([&](double s) { double v = Fc(s); return v * v; }, 0.0, t);
        };
    }

    double iF2 = sol.int_F2(R);
    if (iF2 <= 0.0) throw Error("radial: degenerate load (F vanishes)");
    sol.D = 0.5 / kPi * std::sqrt(iF2 / (2.0 * R));
    sol.inv_2piD = 1.0 / (2.0 * kPi * sol.D);
    sol.inv_8pi2D2 = 1.0 / (8.0 * kPi * kPi * sol.D * sol.D);

    sol.Z0 = load.center_atom * sol.u(0.0);
    if (load.density) {
        auto dens = load.density;
        const RadialSolution& s = sol;
        sol.Z0 += adaptive_simpson(
            [&s, dens](double r) { return s.u(r) * dens(r) * 2.0 * kPi * r; }, 0.0, R);
    }
    return sol;
}

namespace {

// Distance from x0 to the circle |y - y0| = R0 along direction e.
double ray_to_circle(const Vec2& x0, const Vec2& y0, double R0, const Vec2& e) {
    Vec2 q = x0 - y0;
    double qe = dot(q, e);
    double disc = qe * qe + R0 * R0 - q.norm2();
    return -qe + std::sqrt(std::max(disc, 0.0));
}

} // namespace

double OneForceSolution::u(const Vec2& x) const {
    if (distance(x, y0) >= R0) return 0.0;
    double r = distance(x, x0);
    if (r == 0.0) return std::sqrt(2.0) * d0;
    Vec2 e = (x - x0) / r;
    double rho = ray_to_circle(x0, y0, R0, e);
    double h = std::max(0.0, 1.0 - r / rho);
    return std::sqrt(2.0) * d0 * h;
}

Vec2 OneForceSolution::w(const Vec2& x) const {
    if (distance(x, y0) >= R0) return {0.0, 0.0};
    double r = distance(x, x0);
    double h;
    if (r == 0.0) {
        h = 1.0;
    } else {
        Vec2 e = (x - x0) / r;
        h = std::max(0.0, 1.0 - r / ray_to_circle(x0, y0, R0, e));
    }
    return (x0 - y0) * (2.0 * h);
}

OneForceSolution one_force(const OneForceDomain& domain, const Vec2& x0) {
    OneForceSolution sol;
    sol.x0 = x0;
    const double sqrt2 = std::sqrt(2.0);

    if (domain.kind == OneForceDomain::Kind::Disk) {
        double R0 = domain.R0;
        if (x0.norm() >= R0) throw Error("one_force: point outside the open disk");
        sol.y0 = {0.0, 0.0};
        sol.R0 = R0;
        sol.d0 = std::sqrt(R0 * R0 - x0.norm2());
        double r = x0.norm();
        if (r == 0.0) {
            for (Vec2 a : {Vec2{R0, 0}, Vec2{0, R0}, Vec2{-R0, 0}, Vec2{0, -R0}})
                sol.attachments.push_back({a, 0.25, 0, 0, 0});
        } else {
            Vec2 e = x0 / r;
            sol.attachments.push_back({e * R0, 0.5 * (1.0 + r / R0), 0, 0, 0});
            sol.attachments.push_back({e * (-R0), 0.5 * (1.0 - r / R0), 0, 0, 0});
        }
    } else {
        // Normalize: fold into the first quadrant of a rectangle with W <= H.
        double W = domain.width, H = domain.height;
        bool swapped = W > H;
        if (swapped) std::swap(W, H);
        Vec2 p0 = swapped ? Vec2{x0.y, x0.x} : x0;
        if (std::abs(p0.x) >= 0.5 * W || std::abs(p0.y) >= 0.5 * H)
            throw Error("one_force: point outside the open rectangle");
        double sx = p0.x < 0.0 ? -1.0 : 1.0;
        double sy = p0.y < 0.0 ? -1.0 : 1.0;
        Vec2 f{std::abs(p0.x), std::abs(p0.y)};
        const double skel = 0.5 * (H - W);

        Vec2 y0f;
        std::vector<std::pair<Vec2, double>> rho;
        const double tol = 1e-12 * std::max(W, H);
        if (W == H && f.norm() <= tol) {
            // Square center: symmetric four-string selection.
            y0f = {0.0, 0.0};
            double m = 0.5 * W;
            rho = {{{m, 0}, 0.25}, {{0, m}, 0.25}, {{-m, 0}, 0.25}, {{0, -m}, 0.25}};
        } else if (f.y <= skel + tol) {
            // Central band: two-point chord between the longer sides.
            y0f = {0.0, f.y};
            Vec2 b1{-0.5 * W, f.y}, b2{0.5 * W, f.y};
            rho = {{b1, distance(f, b2) / W}, {b2, distance(f, b1) / W}};
        } else if (f.y <= 0.5 * H - f.x + tol) {
            // Triangle below the top: three-point barycentric selection.
            Vec2 a1{0.0, 0.5 * H}, a2{-0.5 * W, skel}, a3{0.5 * W, skel};
            y0f = {0.0, skel};
            double det = cross(a2 - a1, a3 - a1);
            double l1 = cross(a2 - f, a3 - f) / det;
            double l2 = cross(a3 - f, a1 - f) / det;
            double l3 = 1.0 - l1 - l2;
            rho = {{a1, l1}, {a2, l2}, {a3, l3}};
        } else {
            // Corner: 45-degree chord between the two adjacent sides; y0 is the
            // point whose boundary projections are the chord endpoints.
            double t = 0.5 * H - f.y; // distance to the top side
            double s = 0.5 * W - f.x; // distance to the right side
            Vec2 b1{f.x - t, 0.5 * H};
            Vec2 b2{0.5 * W, f.y - s};
            y0f = {f.x - t, f.y - s};
            double chord = distance(b1, b2);
            rho = {{b1, distance(f, b2) / chord}, {b2, distance(f, b1) / chord}};
        }

        auto unfold = [&](Vec2 q) {
            Vec2 r{q.x * sx, q.y * sy};
            return swapped ? Vec2{r.y, r.x} : r;
        };
        sol.y0 = unfold(y0f);
        sol.R0 = std::min(0.5 * W - std::abs(y0f.x), 0.5 * H - std::abs(y0f.y));
        double d2 = sol.R0 * sol.R0 - (f - y0f).norm2();
        if (d2 <= 0.0) throw Error("one_force: barycenter condition not representable");
        sol.d0 = std::sqrt(d2);
        for (auto& [a, wgt] : rho) {
            if (wgt < -1e-12) throw Error("one_force: negative barycentric weight");
            sol.attachments.push_back({unfold(a), std::max(wgt, 0.0), 0, 0, 0});
        }
    }

    sol.energy = sqrt2 * sol.d0;
    for (auto& at : sol.attachments) {
        double len = distance(sol.x0, at.point);
        at.Pi = at.weight * len / (sqrt2 * sol.d0);
        at.pi = at.weight;
        at.alpha = sqrt2 * sol.d0 / len;
    }
    return sol;
}

MembraneSolution OneForceSolution::to_solution(const Grid& grid, const PairSet& pairs) const {
    const double tol = 1e-9 * grid.domain.diameter();
    int idx0 = grid.find_node(x0, tol);
    if (idx0 < 0) throw Error("one_force: x0 is not a grid node");

    MembraneSolution sol;
    sol.grid = grid;
    sol.active_pairs = pairs;
    sol.load_weights.assign(grid.size(), 0.0);
    sol.load_weights[idx0] = 1.0;

    sol.u.resize(grid.size());
    sol.w.resize(grid.size());
    for (int i = 0; i < grid.size(); ++i) {
        sol.u[i] = u(grid.nodes[i]);
        sol.w[i] = w(grid.nodes[i]);
        if (grid.dirichlet[i]) sol.u[i] = 0.0;
        if (grid.boundary[i]) sol.w[i] = {0.0, 0.0};
    }

    sol.t.assign(pairs.size(), 0.0);
    sol.Pi.assign(pairs.size(), 0.0);
    sol.pi.assign(pairs.size(), 0.0);
    for (const auto& at : attachments) {
        int ia = grid.find_node(at.point, tol);
        if (ia < 0) throw Error("one_force: attachment point is not a grid node");
        int lo = std::min(ia, idx0), hi = std::max(ia, idx0);
        int pair = -1;
        for (int e = 0; e < pairs.size(); ++e)
            if (pairs.a[e] == lo && pairs.b[e] == hi) {
                pair = e;
                break;
            }
        if (pair < 0) throw Error("one_force: attachment string missing from the pair set");
        double sign = idx0 == pairs.b[pair] ? 1.0 : -1.0;
        sol.Pi[pair] += at.Pi;
        sol.pi[pair] += sign * at.pi;
        sol.t[pair] = sol.Pi[pair] > 0.0
                          ? sol.pi[pair] * sol.pi[pair] / (2.0 * sol.Pi[pair])
                          : 0.0;
    }

    DiscreteLoad load;
    load.weights = sol.load_weights;
    ConicProgram prog = assemble(grid, pairs, load);
    std::vector<double> x(prog.vars()), y(prog.A.rows, 0.0);
    for (int e = 0; e < pairs.size(); ++e) {
        x[3 * e] = sol.t[e];
        x[3 * e + 1] = sol.Pi[e];
        x[3 * e + 2] = sol.pi[e];
    }
    for (int i = 0; i < grid.size(); ++i) {
        if (prog.transverse_row[i] >= 0) y[prog.transverse_row[i]] = sol.u[i];
        if (prog.inplane_row[i] >= 0) {
            y[prog.inplane_row[i]] = sol.w[i].x;
            y[prog.inplane_row[i] + 1] = sol.w[i].y;
        }
    }
    sol.report = certify(prog, x, y);
    sol.report.status = SolveStatus::Optimal;
    sol.Z0 = sol.report.primal_objective;
    sol.dual_value = sol.report.dual_objective;
    sol.gap_tol = 1e-9;
    sol.feas_tol = 1e-9;

    double max_Pi = 0.0;
    for (int e = 0; e < pairs.size(); ++e) max_Pi = std::max(max_Pi, sol.Pi[e]);
    sol.truss.max_Pi = max_Pi;
    for (int e = 0; e < pairs.size(); ++e) {
        if (sol.Pi[e] >= 1e-6 * max_Pi && sol.Pi[e] > 0.0)
            sol.truss.entries.push_back({e, sol.Pi[e], sol.pi[e], sol.pi[e] / sol.Pi[e]});
        sol.length_mass += pairs.length[e] * sol.Pi[e];
        sol.transport_mass += pairs.length[e] * sol.t[e];
    }
    return sol;
}

} // namespace om
