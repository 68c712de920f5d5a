#include "om/membrane.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <unordered_set>

namespace om {

namespace {

struct Violation {
    double rel;
    int i, j;
};

// Scans all grid pairs against the two-point condition; returns the largest
// relative excess and fills the most violated absent pairs.
double scan_violations(const Grid& grid, const DualAssignment& d,
                       const std::unordered_set<long long>& present, double violation_tol,
                       int batch, std::vector<Violation>& out) {
    const int n = grid.size();
    double max_rel = 0.0;
    out.clear();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double du = d.u[j] - d.u[i];
            Vec2 dw = d.w[j] - d.w[i];
            Vec2 dx = grid.nodes[j] - grid.nodes[i];
            double l2 = dx.norm2();
            double rel = (0.5 * du * du + dot(dw, dx)) / l2 - 1.0;
            if (rel > max_rel) max_rel = rel;
            if (rel > violation_tol && !present.count(static_cast<long long>(i) * n + j))
                out.push_back({rel, i, j});
        }
    }
    if (static_cast<int>(out.size()) > batch) {
        std::nth_element(out.begin(), out.begin() + batch, out.end(),
                         [](const Violation& a, const Violation& b) { return a.rel > b.rel; });
        out.resize(batch);
    }
    std::sort(out.begin(), out.end(), [](const Violation& a, const Violation& b) {
        if (a.rel != b.rel) return a.rel > b.rel;
        if (a.i != b.i) return a.i < b.i;
        return a.j < b.j;
    });
    return max_rel;
}

// Minimal t and global Pi rescaling: a strict objective improvement that
// restores the equi-repartition identity on the returned truss.
void cleanup_primal(const ConicProgram& prog, std::vector<double>& x) {
    double a_mass = 0.0, b_mass = 0.0;
    for (int e = 0; e < prog.pair_count; ++e) {
        double len = prog.c[3 * e];
        double Pi = std::max(x[3 * e + 1], 0.0);
        double pi = x[3 * e + 2];
        double t = Pi > 0.0 ? pi * pi / (2.0 * Pi) : 0.0;
        if (Pi <= 0.0) {
            Pi = 0.0;
            pi = 0.0;
        }
        x[3 * e] = t;
        x[3 * e + 1] = Pi;
        x[3 * e + 2] = pi;
        a_mass += len * Pi;
        b_mass += len * t;
    }
    if (a_mass > 0.0 && b_mass > 0.0) {
        double scale = std::sqrt(b_mass / a_mass);
        for (int e = 0; e < prog.pair_count; ++e) {
            x[3 * e] /= scale;
            x[3 * e + 1] *= scale;
        }
    }
}

} // namespace

MembraneSolution solve_om(const Grid& grid, const DiscreteLoad& load, const SolveOmOptions& opts) {
    if (grid.dirichlet_count() == 0) throw Error("solve_om: Dirichlet set contains no grid node");
    const int n = grid.size();

    const double user_gap = opts.solver.gap_tol;
    const double violation_tol = opts.violation_tol >= 0.0 ? opts.violation_tol : 0.25 * user_gap;

    std::ofstream trace_file;
    if (!opts.trace_csv.empty()) {
        trace_file.open(opts.trace_csv);
        trace_file << "round,iteration,gap,primal_residual,dual_residual\n";
    }

    PairSet pairs = opts.column_generation
                        ? build_pairs(grid, PairRule::within_radius(3.0 * grid.h))
                        : build_pairs(grid, opts.pairs);
    std::unordered_set<long long> present;
    for (int e = 0; e < pairs.size(); ++e)
        present.insert(static_cast<long long>(pairs.a[e]) * n + pairs.b[e]);

    MembraneSolution sol;
    sol.grid = grid;
    sol.load_weights = load.weights;
    sol.gap_tol = user_gap;
    sol.feas_tol = opts.solver.feas_tol;

    SolveOptions sopts = opts.solver;
    sopts.gap_tol = 0.5 * user_gap;

    std::vector<double> warm_x;
    std::vector<double> warm_y;
    SolveResult result;
    ConicProgram prog;
    int round = 0;
    for (;; ++round) {
        if (round >= opts.max_rounds)
            throw Error("solve_om: column generation did not converge in " +
                        std::to_string(opts.max_rounds) + " rounds");
        prog = assemble(grid, pairs, load);
        sopts.warm_x = warm_x.empty() ? nullptr : &warm_x;
        sopts.warm_y = warm_y.empty() ? nullptr : &warm_y;
        if (trace_file.is_open()) {
            int r = round;
            sopts.trace = [&trace_file, r](const TracePoint& t) {
                trace_file << r << "," << t.iteration << "," << t.gap << ","
                           << t.primal_residual << "," << t.dual_residual << "\n";
            };
        }
        result = solve(prog, sopts);
        if (result.report.status == SolveStatus::NumericalFailure)
            throw Error("solve_om: solver reported a numerical failure");
        if (result.report.status == SolveStatus::MaxIter)
            throw Error("solve_om: solver hit the iteration limit (gap " +
                        std::to_string(result.report.relative_gap) + ")");

        std::vector<Violation> add;
        double max_rel =
            scan_violations(grid, result.dual, present, violation_tol, opts.batch_size, add);
        double kappa = 1.0 + std::max(0.0, max_rel);
        sol.round_upper.push_back(result.report.primal_objective);
        sol.round_lower.push_back(result.report.dual_objective / std::sqrt(kappa));

        if (!opts.column_generation || add.empty()) break;
        for (const auto& v : add) {
            pairs.push(grid, v.i, v.j);
            present.insert(static_cast<long long>(v.i) * n + v.j);
        }
        warm_x = result.x;
        warm_x.resize(3 * pairs.size(), 0.0);
        warm_y = result.y;
    }
    sol.rounds = round + 1;

    cleanup_primal(prog, result.x);

    // Scale (u, w) onto the feasible side of every two-point constraint; the
    // scaled dual value is then a valid lower bound.
    {
        std::vector<Violation> ignore;
        double max_rel = opts.column_generation || opts.pairs.kind == PairRule::Kind::Full
                             ? scan_violations(grid, result.dual, present, 1e300, 0, ignore)
                             : [&] {
                                   double m = 0.0;
                                   auto res = two_point_residual(result.dual, grid, pairs);
                                   for (int e = 0; e < pairs.size(); ++e)
                                       m = std::max(m, res[e] / (pairs.length[e] * pairs.length[e]));
                                   return m;
                               }();
        double kappa = 1.0 + std::max(0.0, max_rel);
        double su = 1.0 / std::sqrt(kappa);
        for (int i = 0; i < prog.A.rows; ++i) {
            if (prog.row_map[i].kind == RowTag::Kind::Transverse)
                result.y[i] *= su;
            else
                result.y[i] /= kappa;
        }
    }
    sol.report = certify(prog, result.x, result.y);
    sol.report.iterations = result.report.iterations;
    sol.report.status = result.report.status;

    sol.active_pairs = pairs;
    sol.u.assign(n, 0.0);
    sol.w.assign(n, Vec2{});
    DualAssignment d = extract_dual(prog, result.y);
    sol.u = d.u;
    sol.w = d.w;
    sol.Z0 = sol.report.primal_objective;
    sol.dual_value = sol.report.dual_objective;

    sol.t.resize(pairs.size());
    sol.Pi.resize(pairs.size());
    sol.pi.resize(pairs.size());
    double max_Pi = 0.0, max_pi = 0.0;
    for (int e = 0; e < pairs.size(); ++e) {
        sol.t[e] = result.x[3 * e];
        sol.Pi[e] = result.x[3 * e + 1];
        sol.pi[e] = result.x[3 * e + 2];
        max_Pi = std::max(max_Pi, sol.Pi[e]);
        max_pi = std::max(max_pi, std::abs(sol.pi[e]));
        sol.length_mass += pairs.length[e] * sol.Pi[e];
        sol.transport_mass += pairs.length[e] * sol.t[e];
    }

    const double support_tol = 1e-8 * max_Pi;
    const double prune_tol = 1e-6 * max_Pi;
    sol.truss.max_Pi = max_Pi;
    for (int e = 0; e < pairs.size(); ++e) {
        if (sol.Pi[e] > support_tol) {
            TrussEntry te{e, sol.Pi[e], sol.pi[e], sol.pi[e] / sol.Pi[e]};
            if (sol.Pi[e] >= prune_tol) sol.truss.entries.push_back(te);
        } else if (std::abs(sol.pi[e]) > 1e-8 * max_pi && max_pi > 0.0) {
            sol.warnings.push_back("pair " + std::to_string(pairs.a[e]) + "-" +
                                   std::to_string(pairs.b[e]) +
                                   " carries pi mass without Pi support");
        }
    }
    return sol;
}

double energy_J(const TrussMeasure& truss, const PairSet& pairs) {
    double j = 0.0;
    for (const auto& e : truss.entries) {
        double len = pairs.length[e.pair];
        if (e.Pi < 0.0) return std::numeric_limits<double>::infinity();
        if (e.Pi == 0.0) {
            if (e.pi != 0.0) return std::numeric_limits<double>::infinity();
            continue;
        }
        j += len * (e.Pi + e.pi * e.pi / (2.0 * e.Pi));
    }
    return j;
}

OptimalityRecord check_optimality(const MembraneSolution& sol) {
    OptimalityRecord rec;
    const Grid& grid = sol.grid;
    const PairSet& pairs = sol.active_pairs;
    const int n = grid.size();

    for (int i = 0; i < n; ++i) {
        if (grid.dirichlet[i]) rec.boundary_values = std::max(rec.boundary_values, std::abs(sol.u[i]));
        if (grid.boundary[i])
            rec.boundary_values = std::max(
                rec.boundary_values, std::max(std::abs(sol.w[i].x), std::abs(sol.w[i].y)));
    }

    std::vector<double> trans(n, 0.0);
    std::vector<Vec2> inplane(n, Vec2{});
    for (int e = 0; e < pairs.size(); ++e) {
        int i = pairs.a[e], j = pairs.b[e];
        trans[j] += sol.pi[e];
        trans[i] -= sol.pi[e];
        inplane[j] += pairs.dir[e] * sol.Pi[e];
        inplane[i] -= pairs.dir[e] * sol.Pi[e];
    }
    for (int i = 0; i < n; ++i) {
        if (!grid.dirichlet[i])
            rec.admissibility = std::max(rec.admissibility, std::abs(trans[i] - sol.load_weights[i]));
        if (!grid.boundary[i])
            rec.admissibility = std::max(
                rec.admissibility, std::max(std::abs(inplane[i].x), std::abs(inplane[i].y)));
    }

    DualAssignment d{sol.u, sol.w};
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double l2 = (grid.nodes[j] - grid.nodes[i]).norm2();
            rec.two_point = std::max(rec.two_point, two_point_residual_one(d, grid, i, j) / l2);
        }
    rec.two_point = std::max(rec.two_point, 0.0);

    for (const auto& te : sol.truss.entries) {
        int e = te.pair;
        int i = pairs.a[e], j = pairs.b[e];
        double len = pairs.length[e];
        if (te.alpha)
            rec.alpha_consistency = std::max(rec.alpha_consistency,
                                             std::abs(*te.alpha - (sol.u[j] - sol.u[i]) / len));
        rec.support_tightness =
            std::max(rec.support_tightness,
                     std::abs(two_point_residual_one(d, grid, i, j)) / (len * len));
    }
    return rec;
}

double compliance_at_mass(double Z0, double m, int d) {
    if (m <= 0.0) throw Error("compliance_at_mass: mass must be positive");
    return Z0 * Z0 / (4.0 * m * d);
}

double RasterBundle::trace_mass() const {
    double s = 0.0;
    for (const auto& m : sigma) s += m.trace();
    return s;
}

RasterBundle rasterize(const MembraneSolution& sol) {
    const Grid& grid = sol.grid;
    RasterBundle out;
    out.sigma.assign(grid.size(), Mat2{});
    out.lambda.assign(grid.size(), Vec2{});
    for (const auto& te : sol.truss.entries) {
        int e = te.pair;
        Vec2 a = grid.nodes[sol.active_pairs.a[e]];
        Vec2 b = grid.nodes[sol.active_pairs.b[e]];
        Vec2 tau = sol.active_pairs.dir[e];
        double len = sol.active_pairs.length[e];
        Mat2 tensor = Mat2::outer(tau) * te.Pi;
        Vec2 vec = tau * te.pi;
        detail::walk_cells(a, b, grid.h, [&](double t0, double t1, Vec2 owner) {
            int idx = grid.find_node(owner, 1e-9 * grid.domain.diameter());
            if (idx < 0) idx = grid.nearest_node(a + (b - a) * (0.5 * (t0 + t1)));
            double piece = (t1 - t0) * len;
            out.sigma[idx] += tensor * piece;
            out.lambda[idx] += vec * piece;
        });
    }
    return out;
}

double support_pattern_fraction(const MembraneSolution& sol, double prune_rel) {
    double total = 0.0, good = 0.0;
    const double cut = prune_rel * sol.truss.max_Pi;
    auto anchored = [&](int node) {
        return sol.grid.boundary[node] || sol.load_weights[node] != 0.0;
    };
    for (const auto& te : sol.truss.entries) {
        if (te.Pi < cut) continue;
        total += te.Pi;
        if (anchored(sol.active_pairs.a[te.pair]) && anchored(sol.active_pairs.b[te.pair]))
            good += te.Pi;
    }
    return total > 0.0 ? good / total : 1.0;
}

double string_aligned_fraction(const MembraneSolution& sol, double prune_rel) {
    const Grid& g = sol.grid;
    std::vector<int> loaded;
    for (int i = 0; i < g.size(); ++i)
        if (sol.load_weights[i] != 0.0) loaded.push_back(i);
    const double line_tol = 1e-6 * g.domain.diameter();
    auto anchored = [&](int node) { return g.boundary[node] || sol.load_weights[node] != 0.0; };

    double total = 0.0, good = 0.0;
    const double cut = prune_rel * sol.truss.max_Pi;
    for (const auto& te : sol.truss.entries) {
        if (te.Pi < cut) continue;
        total += te.Pi;
        int ia = sol.active_pairs.a[te.pair], ib = sol.active_pairs.b[te.pair];
        if (anchored(ia) && anchored(ib)) {
            good += te.Pi;
            continue;
        }
        Vec2 A = g.nodes[ia], B = g.nodes[ib];
        Vec2 d = sol.active_pairs.dir[te.pair];
        bool aligned = false;
        for (std::size_t p = 0; p < loaded.size() && !aligned; ++p) {
            Vec2 s = g.nodes[loaded[p]];
            if (std::abs(cross(s - A, d)) > line_tol) continue;
            double ta = dot(A - s, d), tb = dot(B - s, d);
            // Sub-segment of a string leaving s toward the boundary.
            if (ta >= -line_tol && tb >= -line_tol) aligned = true;
            if (ta <= line_tol && tb <= line_tol) aligned = true;
            // Or between two collinear load nodes.
            for (std::size_t q = p + 1; q < loaded.size() && !aligned; ++q) {
                Vec2 s2 = g.nodes[loaded[q]];
                if (std::abs(cross(s2 - A, d)) > line_tol) continue;
                double t2 = dot(s2 - s, d);
                double lo = std::min(0.0, t2), hi = std::max(0.0, t2);
                if (ta >= lo - line_tol && ta <= hi + line_tol && tb >= lo - line_tol &&
                    tb <= hi + line_tol)
                    aligned = true;
            }
        }
        if (aligned) good += te.Pi;
    }
    return total > 0.0 ? good / total : 1.0;
}

} // namespace om
