#pragma once

#include "om/solver.hpp"

#include <optional>
#include <string>
#include <vector>

namespace om {

struct TrussEntry {
    int pair = 0;                // index into active_pairs
    double Pi = 0.0;             // >= 0
    double pi = 0.0;             // signed on the tail->head orientation
    std::optional<double> alpha; // pi/Pi where Pi is above the support threshold
};

struct TrussMeasure {
    std::vector<TrussEntry> entries;
    double max_Pi = 0.0;
};

struct MembraneSolution {
    Grid grid;
    std::vector<double> load_weights;
    PairSet active_pairs;
    std::vector<double> t, Pi, pi; // raw cone variables per active pair
    TrussMeasure truss;            // pruned for reporting
    std::vector<double> u;
    std::vector<Vec2> w;
    double Z0 = 0.0;
    double dual_value = 0.0;
    double length_mass = 0.0;    // sum l_e Pi_e
    double transport_mass = 0.0; // sum l_e pi_e^2 / (2 Pi_e)
    SolveReport report;
    double gap_tol = 1e-6;
    double feas_tol = 1e-7;
    int rounds = 0;
    std::vector<double> round_upper; // primal objective per column-generation round
    std::vector<double> round_lower; // certified lower bound per round
    std::vector<std::string> warnings;
};

struct SolveOmOptions {
    PairRule pairs = PairRule::full();
    bool column_generation = false;
    double violation_tol = -1.0; // < 0: defaults to gap_tol / 4
    SolveOptions solver;
    int max_rounds = 50;
    int batch_size = 1000;
    std::string trace_csv; // when non-empty, iteration trace is appended here
};

MembraneSolution solve_om(const Grid& grid, const DiscreteLoad& load,
                          const SolveOmOptions& opts = {});

// J(pi, Pi) = sum l_e (1 + alpha^2/2) Pi_e; +inf when pi does not vanish where Pi does.
double energy_J(const TrussMeasure& truss, const PairSet& pairs);

struct OptimalityRecord {
    double boundary_values = 0.0;   // (i)  |u| on Dirichlet, |w| on boundary
    double admissibility = 0.0;     // (ii) equality-row residual, absolute
    double two_point = 0.0;         // (iii) max positive residual / l^2, all pairs
    double alpha_consistency = 0.0; // (iv)  |alpha - du/l| on the truss support
    double support_tightness = 0.0; // (v)   |residual| / l^2 on the truss support
    bool pass(double tol) const {
        return boundary_values <= tol && admissibility <= tol && two_point <= tol &&
               alpha_consistency <= tol && support_tightness <= tol;
    }
};

OptimalityRecord check_optimality(const MembraneSolution& sol);

// alpha_0(m) = Z0^2 / (4 m d)
double compliance_at_mass(double Z0, double m, int d = 2);

struct RasterBundle {
    std::vector<Mat2> sigma; // per node cell
    std::vector<Vec2> lambda;
    double trace_mass() const;
};

RasterBundle rasterize(const MembraneSolution& sol);

// Fraction of truss Pi-mass (pruned at prune_rel * max Pi) carried by pairs whose
// endpoints both lie on the boundary or in the support of the load.
double support_pattern_fraction(const MembraneSolution& sol, double prune_rel = 1e-4);

// Same mass fraction, but counting segments that are collinear sub-segments of
// a string from a load node (solvers may subdivide strings at lattice nodes).
double string_aligned_fraction(const MembraneSolution& sol, double prune_rel = 1e-4);

} // namespace om
