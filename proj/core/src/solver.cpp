#include "om/solver.hpp"

#include "om/cone.hpp"

#include <algorithm>
#include <cmath>

namespace om {

namespace {

// Closed-form rotated-cone projection on raw slots, inlined for the hot loop.
inline void project_block(double& u, double& v, double& x) {
    static const double inv_sqrt2 = 0.70710678118654752440;
    double s = (u + v) * inv_sqrt2;
    double t = (u - v) * inv_sqrt2;
    double r = std::sqrt(t * t + x * x);
    if (r <= s) return;
    if (r <= -s) {
        u = v = x = 0.0;
        return;
    }
    double alpha = 0.5 * (s + r);
    double f = r > 0.0 ? alpha / r : 0.0;
    double pt = f * t;
    x *= f;
    u = (alpha + pt) * inv_sqrt2;
    v = (alpha - pt) * inv_sqrt2;
}

SolveReport compute_report(const ConicProgram& prog, const std::vector<double>& x,
                           const std::vector<double>& y, std::vector<double>& ax,
                           std::vector<double>& aty) {
    SolveReport rep;
    const int nvar = prog.vars();
    const int rows = prog.A.rows;

    double pobj = 0.0;
    for (int j = 0; j < nvar; ++j) pobj += prog.c[j] * x[j];
    double dobj = 0.0;
    for (int i = 0; i < rows; ++i) dobj += prog.b[i] * y[i];

    prog.A.multiply(x.data(), ax.data());
    double rnorm2 = 0.0, bnorm2 = 0.0;
    for (int i = 0; i < rows; ++i) {
        double r = ax[i] - prog.b[i];
        rnorm2 += r * r;
        bnorm2 += prog.b[i] * prog.b[i];
    }

    prog.A.multiply_transpose(y.data(), aty.data());
    double max_tp = 0.0;
    for (int e = 0; e < prog.pair_count; ++e) {
        const double len = prog.c[3 * e];
        // slack: s_t = len, s_Pi = len - (A^T y)_Pi, s_pi = -(A^T y)_pi
        double s_pi = -aty[3 * e + 2];
        double s_Pi = len - aty[3 * e + 1];
        double tp = 0.5 * s_pi * s_pi - len * s_Pi; // = two-point residual * len^0 scale
        max_tp = std::max(max_tp, tp / (len * len));
    }

    rep.primal_objective = pobj;
    rep.dual_objective = dobj;
    rep.relative_gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj));
    rep.primal_residual = std::sqrt(rnorm2) / (1.0 + std::sqrt(bnorm2));
    rep.dual_residual = max_tp;
    return rep;
}

bool all_finite(const std::vector<double>& v) {
    for (double t : v)
        if (!std::isfinite(t)) return false;
    return true;
}

} // namespace

SolveReport certify(const ConicProgram& prog, const std::vector<double>& x,
                    const std::vector<double>& y) {
    std::vector<double> ax(prog.A.rows), aty(prog.vars());
    return compute_report(prog, x, y, ax, aty);
}

SolveResult solve(const ConicProgram& prog, const SolveOptions& opts) {
    const int nvar = prog.vars();
    const int rows = prog.A.rows;
    const int pairs = prog.pair_count;

    // Diagonal preconditioning from row/column 1-norms; the primal step is
    // block-constant per cone so the projection stays Euclidean.
    std::vector<double> colsum(nvar, 0.0), rowsum(rows, 0.0);
    for (int i = 0; i < rows; ++i)
        for (int p = prog.A.row_ptr[i]; p < prog.A.row_ptr[i + 1]; ++p) {
            double a = std::abs(prog.A.val[p]);
            rowsum[i] += a;
            colsum[prog.A.col_idx[p]] += a;
        }
    std::vector<double> tau(pairs);
    for (int e = 0; e < pairs; ++e) {
        double m = std::max({colsum[3 * e], colsum[3 * e + 1], colsum[3 * e + 2]});
        tau[e] = opts.balance / (m > 0.0 ? m : 2.0);
    }
    std::vector<double> sigma(rows);
    for (int i = 0; i < rows; ++i)
        sigma[i] = rowsum[i] > 0.0 ? 1.0 / (opts.balance * rowsum[i]) : 1.0;

    SolveResult res;
    res.x.assign(nvar, 0.0);
    res.y.assign(rows, 0.0);
    if (opts.warm_x) {
        if (static_cast<int>(opts.warm_x->size()) > nvar) throw Error("solve: warm start too large");
        std::copy(opts.warm_x->begin(), opts.warm_x->end(), res.x.begin());
    }
    if (opts.warm_y) {
        if (static_cast<int>(opts.warm_y->size()) != rows) throw Error("solve: warm start rows mismatch");
        res.y = *opts.warm_y;
    }

    std::vector<double> aty(nvar), xh(nvar), ext(nvar), ax(rows);
    std::vector<double> rep_ax(rows), rep_aty(nvar);

    const double rho = opts.over_relax;
    SolveReport rep;
    long it = 0;
    for (;; ++it) {
        if (it % opts.check_every == 0) {
            if (!all_finite(res.x) || !all_finite(res.y)) {
                rep.status = SolveStatus::NumericalFailure;
                rep.iterations = it;
                break;
            }
            rep = compute_report(prog, res.x, res.y, rep_ax, rep_aty);
            rep.iterations = it;
            if (opts.trace)
                opts.trace({it, rep.relative_gap, rep.primal_residual, rep.dual_residual});
            if (rep.relative_gap <= opts.gap_tol && rep.primal_residual <= opts.feas_tol &&
                rep.dual_residual <= opts.feas_tol) {
                rep.status = SolveStatus::Optimal;
                break;
            }
        }
        if (it >= opts.max_iter) {
            rep.status = SolveStatus::MaxIter;
            break;
        }

        prog.A.multiply_transpose(res.y.data(), aty.data());
        for (int e = 0; e < pairs; ++e) {
            const double te = tau[e];
            const int k = 3 * e;
            double u = res.x[k] - te * (prog.c[k] - aty[k]);
            double v = res.x[k + 1] - te * (prog.c[k + 1] - aty[k + 1]);
            double w = res.x[k + 2] + te * aty[k + 2];
            project_block(u, v, w);
            xh[k] = u;
            xh[k + 1] = v;
            xh[k + 2] = w;
        }
        for (int j = 0; j < nvar; ++j) ext[j] = 2.0 * xh[j] - res.x[j];
        prog.A.multiply(ext.data(), ax.data());
        for (int j = 0; j < nvar; ++j) res.x[j] += rho * (xh[j] - res.x[j]);
        for (int i = 0; i < rows; ++i) {
            double yh = res.y[i] + sigma[i] * (prog.b[i] - ax[i]);
            res.y[i] += rho * (yh - res.y[i]);
        }
    }

    res.report = rep;
    res.dual = extract_dual(prog, res.y);
    return res;
}

} // namespace om
