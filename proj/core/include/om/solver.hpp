#pragma once

#include "om/assembler.hpp"

#include <functional>
#include <vector>

namespace om {

enum class SolveStatus { Optimal, MaxIter, NumericalFailure };

struct SolveReport {
    double primal_objective = 0.0;
    double dual_objective = 0.0;
    double relative_gap = 0.0;   // |p - d| / (1 + |p|)
    double primal_residual = 0.0; // ||Ax - b||_2 / (1 + ||b||_2)
    double dual_residual = 0.0;   // max_e max(0, two-point residual_e) / l_e^2
    long iterations = 0;
    SolveStatus status = SolveStatus::MaxIter;

    bool optimal() const { return status == SolveStatus::Optimal; }
};

struct TracePoint {
    long iteration;
    double gap;
    double primal_residual;
    double dual_residual;
};

struct SolveOptions {
    double gap_tol = 1e-6;
    double feas_tol = 1e-7;
    long max_iter = 200000;
    double over_relax = 1.8;
    double balance = 1.0; // global primal/dual step ratio
    int check_every = 100;
    const std::vector<double>* warm_x = nullptr;
    const std::vector<double>* warm_y = nullptr;
    std::function<void(const TracePoint&)> trace;
};

struct SolveResult {
    std::vector<double> x; // cone variables (t, Pi, pi) per pair
    std::vector<double> y; // equality multipliers
    DualAssignment dual;
    SolveReport report;
};

// Preconditioned over-relaxed primal-dual hybrid gradient iteration.
SolveResult solve(const ConicProgram& prog, const SolveOptions& opts = {});

// Recomputes objectives, gap and residuals from scratch.
SolveReport certify(const ConicProgram& prog, const std::vector<double>& x,
                    const std::vector<double>& y);

} // namespace om
