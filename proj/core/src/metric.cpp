#include "om/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace om {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void MetricGraph::finish(const Grid& g) {
    cost_.resize(edges_.size());
    adj_.assign(v_.size(), {});
    for (int e = 0; e < edges_.size(); ++e) {
        int i = edges_.a[e], j = edges_.b[e];
        Vec2 dx = g.nodes[j] - g.nodes[i];
        double ip = dot(v_[j] - v_[i], dx);
        double l2 = dx.norm2();
        if (ip < -1e-10 * l2)
            throw Error("metric: monotonicity violated on edge " + std::to_string(i) + "-" +
                        std::to_string(j));
        cost_[e] = std::sqrt(2.0 * std::max(0.0, ip));
        adj_[i].push_back({e, j});
        adj_[j].push_back({e, i});
    }
}

MetricGraph MetricGraph::from_v(const Grid& grid, const PairSet& edges, std::vector<Vec2> v) {
    if (static_cast<int>(v.size()) != grid.size()) throw Error("metric: v/grid size mismatch");
    MetricGraph g;
    g.owned_grid_ = grid;
    g.grid_ = &g.owned_grid_;
    g.edges_ = edges;
    g.v_ = std::move(v);
    g.finish(g.owned_grid_);
    return g;
}

MetricGraph MetricGraph::from_solution(const MembraneSolution& sol) {
    std::vector<Vec2> v(sol.grid.size());
    for (int i = 0; i < sol.grid.size(); ++i) v[i] = sol.grid.nodes[i] - sol.w[i];
    return from_v(sol.grid, sol.active_pairs, std::move(v));
}

namespace {

void dijkstra(const MetricGraph& g, int source, std::vector<double>& dist,
              std::vector<int>& pred) {
    const int n = g.node_count();
    dist.assign(n, kInf);
    pred.assign(n, -1);
    dist[source] = 0.0;
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    heap.push({0.0, source});
    while (!heap.empty()) {
        auto [d, i] = heap.top();
        heap.pop();
        if (d > dist[i]) continue;
        for (auto [e, j] : g.incident(i)) {
            double nd = d + g.edge_cost(e);
            if (nd < dist[j]) {
                dist[j] = nd;
                pred[j] = i;
                heap.push({nd, j});
            }
        }
    }
}

} // namespace

std::vector<double> c_v_distance(const MetricGraph& g, int source) {
    std::vector<double> dist;
    std::vector<int> pred;
    dijkstra(g, source, dist, pred);
    for (double d : dist)
        if (d == kInf) throw Error("c_v_distance: graph is disconnected");
    return dist;
}

std::vector<int> geodesic(const MetricGraph& g, int a, int b) {
    std::vector<double> dist;
    std::vector<int> pred;
    dijkstra(g, a, dist, pred);
    if (dist[b] == kInf) throw Error("geodesic: target unreachable");
    std::vector<int> path;
    for (int cur = b; cur != -1; cur = pred[cur]) path.push_back(cur);
    std::reverse(path.begin(), path.end());
    return path;
}

TransportResult kantorovich_sigma0(const MetricGraph& g, const std::vector<double>& mu,
                                   const std::vector<double>& nu) {
    const Grid& grid = g.grid();
    const int n = g.node_count();
    if (static_cast<int>(mu.size()) != n || static_cast<int>(nu.size()) != n)
        throw Error("kantorovich: measure/grid size mismatch");
    for (int i = 0; i < n; ++i)
        if (mu[i] < 0.0 || nu[i] < 0.0) throw Error("kantorovich: measures must be nonnegative");

    double mu_total = 0.0, nu_total = 0.0;
    std::vector<int> involved;
    for (int i = 0; i < n; ++i) {
        mu_total += mu[i];
        nu_total += nu[i];
        if (mu[i] > 0.0 || nu[i] > 0.0 || grid.dirichlet[i]) involved.push_back(i);
    }
    if (grid.dirichlet_count() == 0 && mu_total != nu_total)
        throw Error("kantorovich: unbalanced measures with empty sigma0");

    const int m = static_cast<int>(involved.size());
    const int reservoir = m; // pools free supply/demand of the Dirichlet set
    const int nn = m + 1;

    // Arc costs: all-pairs shortest paths among involved nodes; the reservoir
    // connects to Dirichlet nodes only, at zero cost.
    std::vector<std::vector<double>> c(nn, std::vector<double>(nn, kInf));
    for (int a = 0; a < m; ++a) {
        std::vector<double> dist = c_v_distance(g, involved[a]);
        for (int b2 = 0; b2 < m; ++b2) c[a][b2] = dist[involved[b2]];
    }
    for (int a = 0; a < m; ++a)
        if (grid.dirichlet[involved[a]]) c[a][reservoir] = c[reservoir][a] = 0.0;
    c[reservoir][reservoir] = 0.0;

    std::vector<double> excess(nn, 0.0);
    for (int a = 0; a < m; ++a) excess[a] = mu[involved[a]] - nu[involved[a]];
    excess[reservoir] = nu_total - mu_total;

    // Successive shortest augmenting paths with potentials.
    std::vector<std::vector<double>> flow(nn, std::vector<double>(nn, 0.0));
    std::vector<double> potential(nn, 0.0);
    const double eps = 1e-15 * (1.0 + mu_total + nu_total);
    for (;;) {
        int src = -1;
        for (int a = 0; a < nn; ++a)
            if (excess[a] > eps) {
                src = a;
                break;
            }
        if (src < 0) break;

        std::vector<double> dist(nn, kInf);
        std::vector<int> pred(nn, -1);
        std::vector<bool> pred_rev(nn, false);
        std::vector<bool> done(nn, false);
        dist[src] = 0.0;
        for (;;) {
            int u = -1;
            double du = kInf;
            for (int a = 0; a < nn; ++a)
                if (!done[a] && dist[a] < du) {
                    du = dist[a];
                    u = a;
                }
            if (u < 0) break;
            done[u] = true;
            for (int w = 0; w < nn; ++w) {
                if (w == u || done[w]) continue;
                if (c[u][w] < kInf) {
                    double red = c[u][w] + potential[u] - potential[w];
                    if (dist[u] + red < dist[w]) {
                        dist[w] = dist[u] + red;
                        pred[w] = u;
                        pred_rev[w] = false;
                    }
                }
                if (flow[w][u] > eps) {
                    double red = -c[w][u] + potential[u] - potential[w];
                    if (dist[u] + red < dist[w]) {
                        dist[w] = dist[u] + red;
                        pred[w] = u;
                        pred_rev[w] = true;
                    }
                }
            }
        }

        int dst = -1;
        double best = kInf;
        for (int a = 0; a < nn; ++a)
            if (excess[a] < -eps && dist[a] < best) {
                best = dist[a];
                dst = a;
            }
        if (dst < 0) throw Error("kantorovich: no deficit node reachable");

        double push = std::min(excess[src], -excess[dst]);
        for (int cur = dst; cur != src; cur = pred[cur]) {
            int p = pred[cur];
            if (pred_rev[cur]) push = std::min(push, flow[cur][p]);
        }
        for (int cur = dst; cur != src; cur = pred[cur]) {
            int p = pred[cur];
            if (pred_rev[cur])
                flow[cur][p] -= push;
            else
                flow[p][cur] += push;
        }
        excess[src] -= push;
        excess[dst] += push;
        double cap = dist[dst];
        for (int a = 0; a < nn; ++a) potential[a] += std::min(dist[a], cap);
    }

    TransportResult out;
    for (int a = 0; a < nn; ++a)
        for (int b2 = 0; b2 < nn; ++b2) {
            double f = flow[a][b2];
            if (f <= eps) continue;
            out.cost += f * c[a][b2];
            if (a < m && b2 < m) out.plan.push_back({involved[a], involved[b2], f});
        }
    return out;
}

AuditResult maximal_metric_audit(const MembraneSolution& sol, const DiscreteLoad& load,
                                 double audit_tol) {
    MetricGraph g = MetricGraph::from_solution(sol);
    const int n = sol.grid.size();
    std::vector<double> mu(n, 0.0), nu(n, 0.0);
    for (int i = 0; i < n; ++i) {
        if (load.weights[i] > 0.0) mu[i] = load.weights[i];
        if (load.weights[i] < 0.0) nu[i] = -load.weights[i];
    }
    AuditResult out;
    out.transport = kantorovich_sigma0(g, mu, nu);
    out.W = out.transport.cost;
    out.gap_to_Z0 = sol.Z0 - out.W;
    double tol = audit_tol >= 0.0 ? audit_tol : 1e-2 * std::abs(sol.Z0);
    out.within_tol = std::abs(out.gap_to_Z0) <= tol;
    return out;
}

} // namespace om
