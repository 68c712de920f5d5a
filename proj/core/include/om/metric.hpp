#pragma once

#include "om/membrane.hpp"

namespace om {

// Edge-weighted graph carrying the monotone-map segment cost
// l_v(x,y) = sqrt(2 max(0, <v_y - v_x, y - x>)).
class MetricGraph {
public:
    static MetricGraph from_v(const Grid& grid, const PairSet& edges, std::vector<Vec2> v);
    // v = id - w from a solved membrane, over its active pairs.
    static MetricGraph from_solution(const MembraneSolution& sol);

    const Grid& grid() const { return *grid_; }
    const PairSet& edges() const { return edges_; }
    const std::vector<Vec2>& v() const { return v_; }
    double edge_cost(int e) const { return cost_[e]; }
    int node_count() const { return static_cast<int>(v_.size()); }

    // Adjacency: per node, list of (edge index, neighbor).
    const std::vector<std::pair<int, int>>& incident(int node) const { return adj_[node]; }

private:
    const Grid* grid_ = nullptr;
    Grid owned_grid_;
    PairSet edges_;
    std::vector<Vec2> v_;
    std::vector<double> cost_;
    std::vector<std::vector<std::pair<int, int>>> adj_;
    void finish(const Grid& g);
};

// Single-source shortest paths; an upper bound of the continuum pseudo-metric
// restricted to chains through grid nodes along active edges.
std::vector<double> c_v_distance(const MetricGraph& g, int source);

// Node path realizing c_v_distance(a)[b].
std::vector<int> geodesic(const MetricGraph& g, int a, int b);

struct TransportMove {
    int from;
    int to;
    double mass;
};

struct TransportResult {
    double cost = 0.0;
    std::vector<TransportMove> plan;
};

// Boundary-relaxed Kantorovich distance: min-cost flow from mu to nu with free
// creation/absorption on the Dirichlet nodes, arc costs c_v.
TransportResult kantorovich_sigma0(const MetricGraph& g, const std::vector<double>& mu,
                                   const std::vector<double>& nu);

struct AuditResult {
    double W = 0.0;
    double gap_to_Z0 = 0.0;
    bool within_tol = false;
    TransportResult transport;
};

// Computes W^{Sigma0}_{c_v}(f+, f-) for v = id - w of the solution and compares
// against Z0. audit_tol < 0 selects the default 1e-2 * Z0.
AuditResult maximal_metric_audit(const MembraneSolution& sol, const DiscreteLoad& load,
                                 double audit_tol = -1.0);

} // namespace om
