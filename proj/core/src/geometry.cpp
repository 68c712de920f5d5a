#include "om/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace om {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Union-find for pair-graph connectivity.
struct DisjointSet {
    std::vector<int> parent;
    explicit DisjointSet(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int i) {
        while (parent[i] != i) {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    }
    void unite(int i, int j) { parent[find(i)] = find(j); }
};

std::vector<Vec2> clip_polygon_halfplane(const std::vector<Vec2>& poly,
                                         const Vec2& p0, const Vec2& n) {
    // Keeps the side dot(q - p0, n) >= 0.
    std::vector<Vec2> out;
    const int m = static_cast<int>(poly.size());
    for (int i = 0; i < m; ++i) {
        const Vec2& cur = poly[i];
        const Vec2& nxt = poly[(i + 1) % m];
        double dc = dot(cur - p0, n);
        double dn = dot(nxt - p0, n);
        if (dc >= 0.0) out.push_back(cur);
        if ((dc > 0.0 && dn < 0.0) || (dc < 0.0 && dn > 0.0)) {
            double t = dc / (dc - dn);
            out.push_back(cur + (nxt - cur) * t);
        }
    }
    return out;
}

double polygon_area(const std::vector<Vec2>& poly) {
    double a = 0.0;
    const int m = static_cast<int>(poly.size());
    for (int i = 0; i < m; ++i) a += cross(poly[i], poly[(i + 1) % m]);
    return 0.5 * a;
}

Vec2 polygon_centroid(const std::vector<Vec2>& poly, double area) {
    if (std::abs(area) < 1e-300) return poly.empty() ? Vec2{} : poly[0];
    Vec2 c{0, 0};
    const int m = static_cast<int>(poly.size());
    for (int i = 0; i < m; ++i) {
        const Vec2& p = poly[i];
        const Vec2& q = poly[(i + 1) % m];
        double w = cross(p, q);
        c += (p + q) * w;
    }
    return c / (6.0 * area);
}

} // namespace

double detail::point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    Vec2 d = b - a;
    double len2 = d.norm2();
    if (len2 == 0.0) return distance(p, a);
    double t = std::clamp(dot(p - a, d) / len2, 0.0, 1.0);
    return distance(p, a + d * t);
}

Domain Domain::polygon(std::vector<Vec2> vertices) {
    if (vertices.size() < 3) throw Error("domain: polygon needs at least 3 vertices");
    const int n = static_cast<int>(vertices.size());
    for (int i = 0; i < n; ++i) {
        Vec2 e1 = vertices[(i + 1) % n] - vertices[i];
        Vec2 e2 = vertices[(i + 2) % n] - vertices[(i + 1) % n];
        if (cross(e1, e2) < 0.0) throw Error("domain: polygon is not convex counterclockwise");
    }
    if (polygon_area(vertices) <= 0.0) throw Error("domain: polygon is degenerate");
    Domain d;
    d.vertices_ = std::move(vertices);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            d.diameter_ = std::max(d.diameter_, distance(d.vertices_[i], d.vertices_[j]));
    return d;
}

Domain Domain::unit_square() { return rectangle(1.0, 1.0); }

Domain Domain::rectangle(double width, double height) {
    if (width <= 0.0 || height <= 0.0) throw Error("domain: rectangle sides must be positive");
    double w = 0.5 * width, h = 0.5 * height;
    return polygon({{-w, -h}, {w, -h}, {w, h}, {-w, h}});
}

Domain Domain::regular_polygon(int n, double circumradius) {
    if (n < 3 || circumradius <= 0.0) throw Error("domain: bad regular polygon parameters");
    std::vector<Vec2> v(n);
    for (int i = 0; i < n; ++i) {
        double ang = 2.0 * kPi * i / n;
        v[i] = {circumradius * std::cos(ang), circumradius * std::sin(ang)};
    }
    return polygon(std::move(v));
}

double Domain::area() const { return polygon_area(vertices_); }

double Domain::signed_inset(const Vec2& p) const {
    double best = std::numeric_limits<double>::infinity();
    const int n = static_cast<int>(vertices_.size());
    for (int i = 0; i < n; ++i) {
        const Vec2& a = vertices_[i];
        const Vec2& b = vertices_[(i + 1) % n];
        Vec2 e = b - a;
        Vec2 inward = Vec2{-e.y, e.x} / e.norm();
        best = std::min(best, dot(p - a, inward));
    }
    return best;
}

double Domain::boundary_distance(const Vec2& p) const {
    double best = std::numeric_limits<double>::infinity();
    const int n = static_cast<int>(vertices_.size());
    for (int i = 0; i < n; ++i)
        best = std::min(best, detail::point_segment_distance(p, vertices_[i], vertices_[(i + 1) % n]));
    return best;
}

BoundarySubset BoundarySubset::whole_boundary(const Domain& d) {
    BoundarySubset s;
    const auto& v = d.vertices();
    const int n = static_cast<int>(v.size());
    for (int i = 0; i < n; ++i) s.segments.push_back({v[i], v[(i + 1) % n]});
    return s;
}

BoundarySubset BoundarySubset::edges(const Domain& d, const std::vector<int>& edge_ids) {
    BoundarySubset s;
    const auto& v = d.vertices();
    const int n = static_cast<int>(v.size());
    for (int id : edge_ids) {
        if (id < 0 || id >= n) throw Error("sigma0: edge index out of range");
        s.segments.push_back({v[id], v[(id + 1) % n]});
    }
    return s;
}

BoundarySubset BoundarySubset::at_points(std::vector<Vec2> pts) {
    BoundarySubset s;
    s.points = std::move(pts);
    return s;
}

bool BoundarySubset::contains(const Vec2& p, double tol) const {
    return distance(p) <= tol;
}

double BoundarySubset::distance(const Vec2& p) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : segments) best = std::min(best, detail::point_segment_distance(p, s[0], s[1]));
    for (const auto& q : points) best = std::min(best, om::distance(p, q));
    return best;
}

int Grid::dirichlet_count() const {
    int c = 0;
    for (auto f : dirichlet) c += f;
    return c;
}

int Grid::find_node(const Vec2& p, double tol) const {
    for (int i = 0; i < size(); ++i)
        if (distance(nodes[i], p) <= tol) return i;
    return -1;
}

int Grid::nearest_node(const Vec2& p) const {
    int best = -1;
    double bd = std::numeric_limits<double>::infinity();
    for (int i = 0; i < size(); ++i) {
        double d = distance(nodes[i], p);
        if (d < bd) {
            bd = d;
            best = i;
        }
    }
    return best;
}

void PairSet::push(const Grid& g, int i, int j) {
    if (i == j) throw Error("pairs: diagonal pair");
    if (i > j) std::swap(i, j);
    Vec2 d = g.nodes[j] - g.nodes[i];
    double len = d.norm();
    a.push_back(i);
    b.push_back(j);
    length.push_back(len);
    dir.push_back(d / len);
}

Grid build_grid(const Domain& domain, double h, const BoundarySubset& sigma0) {
    if (h <= 0.0) throw Error("grid: mesh size must be positive");
    const double tol = 1e-12 * domain.diameter();

    // Sigma0 pieces must lie on the boundary.
    for (const auto& s : sigma0.segments) {
        Vec2 mid = (s[0] + s[1]) * 0.5;
        if (domain.boundary_distance(s[0]) > tol || domain.boundary_distance(s[1]) > tol ||
            domain.boundary_distance(mid) > tol)
            throw Error("grid: sigma0 segment does not lie on the domain boundary");
    }
    for (const auto& p : sigma0.points)
        if (domain.boundary_distance(p) > tol)
            throw Error("grid: sigma0 point does not lie on the domain boundary");

    double minx = std::numeric_limits<double>::infinity(), maxx = -minx;
    double miny = minx, maxy = -minx;
    for (const auto& v : domain.vertices()) {
        minx = std::min(minx, v.x);
        maxx = std::max(maxx, v.x);
        miny = std::min(miny, v.y);
        maxy = std::max(maxy, v.y);
    }
    auto lo = [&](double m) { return static_cast<long>(std::floor(m / h)) - 1; };
    auto hi = [&](double m) { return static_cast<long>(std::ceil(m / h)) + 1; };

    Grid g;
    g.h = h;
    g.domain = domain;
    g.sigma0 = sigma0;
    for (long k2 = lo(miny); k2 <= hi(maxy); ++k2) {
        for (long k1 = lo(minx); k1 <= hi(maxx); ++k1) {
            Vec2 p{k1 * h, k2 * h};
            if (!domain.contains(p, tol)) continue;
            bool on_boundary = domain.boundary_distance(p) <= tol;
            bool on_sigma0 = on_boundary && sigma0.contains(p, tol);
            g.nodes.push_back(p);
            g.boundary.push_back(on_boundary ? 1 : 0);
            g.dirichlet.push_back(on_sigma0 ? 1 : 0);
        }
    }
    if (g.nodes.empty()) throw Error("grid: no lattice node lies in the domain");
    return g;
}

PairSet build_pairs(const Grid& grid, const PairRule& rule) {
    const int n = grid.size();
    if (n == 0) throw Error("pairs: empty grid");
    PairSet ps;
    switch (rule.kind) {
    case PairRule::Kind::Full:
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) ps.push(grid, i, j);
        break;
    case PairRule::Kind::Radius: {
        if (rule.radius < grid.h) throw Error("pairs: radius smaller than the mesh size");
        const double r2 = rule.radius * rule.radius * (1.0 + 1e-12);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if ((grid.nodes[j] - grid.nodes[i]).norm2() <= r2) ps.push(grid, i, j);
        break;
    }
    case PairRule::Kind::KNearest: {
        if (rule.k < 1) throw Error("pairs: k must be at least 1");
        std::vector<std::pair<int, int>> keep;
        std::vector<std::pair<double, int>> cand(n - 1);
        for (int i = 0; i < n; ++i) {
            cand.clear();
            for (int j = 0; j < n; ++j)
                if (j != i) cand.push_back({(grid.nodes[j] - grid.nodes[i]).norm2(), j});
            int k = std::min<int>(rule.k, static_cast<int>(cand.size()));
            std::partial_sort(cand.begin(), cand.begin() + k, cand.end());
            for (int q = 0; q < k; ++q) {
                int j = cand[q].second;
                keep.push_back({std::min(i, j), std::max(i, j)});
            }
        }
        std::sort(keep.begin(), keep.end());
        keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
        for (auto [i, j] : keep) ps.push(grid, i, j);
        break;
    }
    }

    DisjointSet ds(n);
    for (int e = 0; e < ps.size(); ++e) ds.unite(ps.a[e], ps.b[e]);
    int root = ds.find(0);
    for (int i = 1; i < n; ++i)
        if (ds.find(i) != root) throw Error("pairs: pair graph does not connect the grid");
    return ps;
}

void clipped_cell(const Grid& grid, int node, double& area, Vec2& centroid) {
    const double hh = 0.5 * grid.h;
    Vec2 c = grid.nodes[node];
    std::vector<Vec2> poly = {{c.x - hh, c.y - hh}, {c.x + hh, c.y - hh},
                              {c.x + hh, c.y + hh}, {c.x - hh, c.y + hh}};
    const auto& v = grid.domain.vertices();
    const int n = static_cast<int>(v.size());
    for (int i = 0; i < n && !poly.empty(); ++i) {
        Vec2 e = v[(i + 1) % n] - v[i];
        Vec2 inward{-e.y, e.x};
        poly = clip_polygon_halfplane(poly, v[i], inward);
    }
    area = poly.empty() ? 0.0 : polygon_area(poly);
    centroid = poly.empty() ? c : polygon_centroid(poly, area);
}

void detail::walk_cells(const Vec2& a, const Vec2& b, double h,
                        const std::function<void(double, double, Vec2)>& f) {
    // Breakpoints at half-grid lines (k + 1/2) h in each coordinate.
    std::vector<double> ts = {0.0, 1.0};
    Vec2 d = b - a;
    for (int axis = 0; axis < 2; ++axis) {
        double da = axis == 0 ? d.x : d.y;
        double pa = axis == 0 ? a.x : a.y;
        if (std::abs(da) < 1e-300) continue;
        double qlo = std::min(pa, pa + da), qhi = std::max(pa, pa + da);
        long klo = static_cast<long>(std::floor(qlo / h - 0.5));
        long khi = static_cast<long>(std::ceil(qhi / h + 0.5));
        for (long k = klo; k <= khi; ++k) {
            double line = (k + 0.5) * h;
            double t = (line - pa) / da;
            if (t > 0.0 && t < 1.0) ts.push_back(t);
        }
    }
    std::sort(ts.begin(), ts.end());
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
        double t0 = ts[i], t1 = ts[i + 1];
        if (t1 - t0 <= 0.0) continue;
        Vec2 mid = a + d * (0.5 * (t0 + t1));
        Vec2 owner{std::round(mid.x / h) * h, std::round(mid.y / h) * h};
        f(t0, t1, owner);
    }
}

double LoadSpec::total_mass(const Domain& d) const {
    double m = density * d.area();
    for (const auto& p : points) m += p.mass;
    for (const auto& l : lines) m += l.density * distance(l.a, l.b);
    return m;
}

bool LoadSpec::nonnegative() const {
    if (density < 0.0) return false;
    for (const auto& p : points)
        if (p.mass < 0.0) return false;
    for (const auto& l : lines)
        if (l.density < 0.0) return false;
    return true;
}

double DiscreteLoad::total() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
}

bool DiscreteLoad::nonnegative() const {
    for (double w : weights)
        if (w < 0.0) return false;
    return true;
}

DiscreteLoad discretize_load(const Grid& grid, const LoadSpec& load) {
    const int n = grid.size();
    DiscreteLoad out;
    out.weights.assign(n, 0.0);
    if (!load.points.empty())
        out.origin += std::to_string(load.points.size()) + " point mass(es) ";
    if (load.density != 0.0) out.origin += "density " + std::to_string(load.density) + " ";
    if (!load.lines.empty())
        out.origin += std::to_string(load.lines.size()) + " line segment(s)";

    for (const auto& pm : load.points) {
        int idx = grid.nearest_node(pm.at);
        if (idx < 0) throw Error("load: empty grid");
        if (grid.dirichlet[idx])
            throw Error("load on Dirichlet node");
        out.weights[idx] += pm.mass;
    }

    if (load.density != 0.0) {
        for (int i = 0; i < n; ++i) {
            double area;
            Vec2 centroid;
            clipped_cell(grid, i, area, centroid);
            (void)centroid; // constant density: midpoint sample equals the constant
            out.weights[i] += load.density * area;
        }
    }

    for (const auto& ld : load.lines) {
        double seg_len = distance(ld.a, ld.b);
        detail::walk_cells(ld.a, ld.b, grid.h, [&](double t0, double t1, Vec2 owner) {
            int idx = grid.find_node(owner, 1e-9 * grid.domain.diameter());
            if (idx < 0) idx = grid.nearest_node(ld.a + (ld.b - ld.a) * (0.5 * (t0 + t1)));
            out.weights[idx] += ld.density * (t1 - t0) * seg_len;
        });
    }

    // The load must vanish on the Dirichlet set; distributed mass landing there
    // is absorbed directly by the support.
    for (int i = 0; i < n; ++i) {
        if (grid.dirichlet[i] && out.weights[i] != 0.0) {
            out.absorbed += out.weights[i];
            out.weights[i] = 0.0;
        }
    }
    return out;
}

} // namespace om
