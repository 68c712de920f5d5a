#pragma once

#include "om/geometry.hpp"

#include <iosfwd>
#include <vector>

namespace om {

// Compressed sparse rows plus the transposed pattern for fast A^T products.
struct SparseMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<int> row_ptr, col_idx;
    std::vector<double> val;
    std::vector<int> cptr, ridx; // transpose (CSC view)
    std::vector<double> cval;

    void build(int r, int c, std::vector<int> ti, std::vector<int> tj, std::vector<double> tv);
    void multiply(const double* x, double* y) const;           // y = A x
    void multiply_transpose(const double* y, double* x) const; // x = A^T y
    int nnz() const { return static_cast<int>(val.size()); }
};

struct RowTag {
    enum class Kind { Transverse, InPlaneX, InPlaneY };
    Kind kind;
    int node;
};

// Standard-form conic-quadratic program
//   min c^T x   s.t.  A x = b,  (t_e, Pi_e, pi_e) in rotated cone per pair.
struct ConicProgram {
    SparseMatrix A;
    std::vector<double> b, c;
    int pair_count = 0;
    int node_count = 0;
    std::vector<RowTag> row_map;
    std::vector<int> transverse_row; // per node, -1 if Dirichlet
    std::vector<int> inplane_row;    // per node, x-row index (-1 if boundary); y-row = +1

    int vars() const { return 3 * pair_count; }
};

struct DualAssignment {
    std::vector<double> u; // per node, 0 on Dirichlet nodes
    std::vector<Vec2> w;   // per node, 0 on boundary nodes
};

ConicProgram assemble(const Grid& grid, const PairSet& pairs, const DiscreteLoad& load);

// Two-point residual (u_b-u_a)^2/2 + <w_b-w_a, x_b-x_a> - l^2 per pair; <= 0 feasible.
std::vector<double> two_point_residual(const DualAssignment& assign, const Grid& grid,
                                       const PairSet& pairs);
double two_point_residual_one(const DualAssignment& assign, const Grid& grid, int i, int j);

// Extracts (u, w) from equality-row multipliers.
DualAssignment extract_dual(const ConicProgram& prog, const std::vector<double>& y);

// Triplet dump plus cone layout, for debugging.
void dump_program(const ConicProgram& prog, std::ostream& os);

} // namespace om
