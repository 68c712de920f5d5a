#include "om/assembler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

namespace om {

void SparseMatrix::build(int r, int c, std::vector<int> ti, std::vector<int> tj,
                         std::vector<double> tv) {
    rows = r;
    cols = c;
    const std::size_t m = tv.size();
    row_ptr.assign(r + 1, 0);
    for (std::size_t k = 0; k < m; ++k) row_ptr[ti[k] + 1]++;
    for (int i = 0; i < r; ++i) row_ptr[i + 1] += row_ptr[i];
    col_idx.resize(m);
    val.resize(m);
    {
        std::vector<int> cur(row_ptr.begin(), row_ptr.end() - 1);
        for (std::size_t k = 0; k < m; ++k) {
            int p = cur[ti[k]]++;
            col_idx[p] = tj[k];
            val[p] = tv[k];
        }
    }
    cptr.assign(c + 1, 0);
    for (std::size_t k = 0; k < m; ++k) cptr[tj[k] + 1]++;
    for (int j = 0; j < c; ++j) cptr[j + 1] += cptr[j];
    ridx.resize(m);
    cval.resize(m);
    {
        std::vector<int> cur(cptr.begin(), cptr.end() - 1);
        // Walk rows in order so each column's entries are sorted by row.
        for (int i = 0; i < r; ++i) {
            for (int p = row_ptr[i]; p < row_ptr[i + 1]; ++p) {
                int q = cur[col_idx[p]]++;
                ridx[q] = i;
                cval[q] = val[p];
            }
        }
    }
}

void SparseMatrix::multiply(const double* x, double* y) const {
    for (int i = 0; i < rows; ++i) {
        double s = 0.0;
        for (int p = row_ptr[i]; p < row_ptr[i + 1]; ++p) s += val[p] * x[col_idx[p]];
        y[i] = s;
    }
}

void SparseMatrix::multiply_transpose(const double* y, double* x) const {
    for (int j = 0; j < cols; ++j) {
        double s = 0.0;
        for (int p = cptr[j]; p < cptr[j + 1]; ++p) s += cval[p] * y[ridx[p]];
        x[j] = s;
    }
}

ConicProgram assemble(const Grid& grid, const PairSet& pairs, const DiscreteLoad& load) {
    const int n = grid.size();
    if (pairs.size() == 0) throw Error("assemble: empty pair set");
    if (static_cast<int>(load.weights.size()) != n) throw Error("assemble: load/grid mismatch");
    for (int i = 0; i < n; ++i)
        if (grid.dirichlet[i] && load.weights[i] != 0.0) throw Error("load on Dirichlet node");

    ConicProgram prog;
    prog.pair_count = pairs.size();
    prog.node_count = n;
    prog.transverse_row.assign(n, -1);
    prog.inplane_row.assign(n, -1);

    int row = 0;
    for (int i = 0; i < n; ++i) {
        if (!grid.dirichlet[i]) {
            prog.transverse_row[i] = row++;
            prog.row_map.push_back({RowTag::Kind::Transverse, i});
        }
    }
    for (int i = 0; i < n; ++i) {
        if (!grid.boundary[i]) {
            prog.inplane_row[i] = row;
            prog.row_map.push_back({RowTag::Kind::InPlaneX, i});
            prog.row_map.push_back({RowTag::Kind::InPlaneY, i});
            row += 2;
        }
    }
    const int rows = row;

    // Slater check: the zero assignment is strictly feasible for the dual.
    double min_len = *std::min_element(pairs.length.begin(), pairs.length.end());
    if (!(min_len > 0.0)) throw Error("assemble: degenerate pair of zero length");

    std::vector<int> ti;
    std::vector<int> tj;
    std::vector<double> tv;
    ti.reserve(6 * pairs.size());
    tj.reserve(6 * pairs.size());
    tv.reserve(6 * pairs.size());

    prog.c.assign(3 * pairs.size(), 0.0);
    for (int e = 0; e < pairs.size(); ++e) {
        const int i = pairs.a[e], j = pairs.b[e];
        const Vec2 tau = pairs.dir[e];
        prog.c[3 * e + 0] = pairs.length[e]; // t_e
        prog.c[3 * e + 1] = pairs.length[e]; // Pi_e
        // pi_e column: transverse rows, +1 at head, -1 at tail.
        if (prog.transverse_row[j] >= 0) {
            ti.push_back(prog.transverse_row[j]);
            tj.push_back(3 * e + 2);
            tv.push_back(1.0);
        }
        if (prog.transverse_row[i] >= 0) {
            ti.push_back(prog.transverse_row[i]);
            tj.push_back(3 * e + 2);
            tv.push_back(-1.0);
        }
        // Pi_e column: in-plane rows, +tau at head, -tau at tail.
        if (prog.inplane_row[j] >= 0) {
            ti.push_back(prog.inplane_row[j]);
            tj.push_back(3 * e + 1);
            tv.push_back(tau.x);
            ti.push_back(prog.inplane_row[j] + 1);
            tj.push_back(3 * e + 1);
            tv.push_back(tau.y);
        }
        if (prog.inplane_row[i] >= 0) {
            ti.push_back(prog.inplane_row[i]);
            tj.push_back(3 * e + 1);
            tv.push_back(-tau.x);
            ti.push_back(prog.inplane_row[i] + 1);
            tj.push_back(3 * e + 1);
            tv.push_back(-tau.y);
        }
    }
    prog.A.build(rows, 3 * pairs.size(), std::move(ti), std::move(tj), std::move(tv));

    prog.b.assign(rows, 0.0);
    for (int i = 0; i < n; ++i)
        if (prog.transverse_row[i] >= 0) prog.b[prog.transverse_row[i]] = load.weights[i];
    return prog;
}

double two_point_residual_one(const DualAssignment& assign, const Grid& grid, int i, int j) {
    double du = assign.u[j] - assign.u[i];
    Vec2 dw = assign.w[j] - assign.w[i];
    Vec2 dx = grid.nodes[j] - grid.nodes[i];
    return 0.5 * du * du + dot(dw, dx) - dx.norm2();
}

std::vector<double> two_point_residual(const DualAssignment& assign, const Grid& grid,
                                       const PairSet& pairs) {
    if (static_cast<int>(assign.u.size()) != grid.size() ||
        static_cast<int>(assign.w.size()) != grid.size())
        throw Error("two_point_residual: assignment/grid mismatch");
    std::vector<double> res(pairs.size());
    for (int e = 0; e < pairs.size(); ++e)
        res[e] = two_point_residual_one(assign, grid, pairs.a[e], pairs.b[e]);
    return res;
}

DualAssignment extract_dual(const ConicProgram& prog, const std::vector<double>& y) {
    DualAssignment d;
    d.u.assign(prog.node_count, 0.0);
    d.w.assign(prog.node_count, Vec2{});
    for (int i = 0; i < prog.node_count; ++i) {
        if (prog.transverse_row[i] >= 0) d.u[i] = y[prog.transverse_row[i]];
        if (prog.inplane_row[i] >= 0)
            d.w[i] = {y[prog.inplane_row[i]], y[prog.inplane_row[i] + 1]};
    }
    return d;
}

void dump_program(const ConicProgram& prog, std::ostream& os) {
    os << "conic-program rows=" << prog.A.rows << " cols=" << prog.A.cols
       << " pairs=" << prog.pair_count << "\n";
    os << "# cone layout: variables (3e, 3e+1, 3e+2) = (t, Pi, pi) of pair e, rotated quadratic cone\n";
    os << "# objective triplets (index value)\n";
    for (int j = 0; j < prog.A.cols; ++j)
        if (prog.c[j] != 0.0) os << j << " " << prog.c[j] << "\n";
    os << "# equality triplets (row col value)\n";
    for (int i = 0; i < prog.A.rows; ++i)
        for (int p = prog.A.row_ptr[i]; p < prog.A.row_ptr[i + 1]; ++p)
            os << i << " " << prog.A.col_idx[p] << " " << prog.A.val[p] << "\n";
    os << "# rhs (row value kind node)\n";
    for (int i = 0; i < prog.A.rows; ++i) {
        const char* kind = prog.row_map[i].kind == RowTag::Kind::Transverse ? "transverse"
                           : prog.row_map[i].kind == RowTag::Kind::InPlaneX ? "in_plane_x"
                                                                            : "in_plane_y";
        os << i << " " << prog.b[i] << " " << kind << " " << prog.row_map[i].node << "\n";
    }
}

} // namespace om
