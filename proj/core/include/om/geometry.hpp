#pragma once

#include "om/common.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace om {

// Convex polygonal design domain, vertices counterclockwise.
class Domain {
public:
    static Domain polygon(std::vector<Vec2> vertices);
    static Domain unit_square();                       // [-1/2,1/2]^2
    static Domain rectangle(double width, double height); // centered at origin
    static Domain regular_polygon(int n, double circumradius);

    const std::vector<Vec2>& vertices() const { return vertices_; }
    double diameter() const { return diameter_; }
    double area() const;

    // Minimum over edges of the inward signed distance; >= 0 inside.
    double signed_inset(const Vec2& p) const;
    bool contains(const Vec2& p, double tol) const { return signed_inset(p) >= -tol; }
    // Euclidean distance to the boundary polyline.
    double boundary_distance(const Vec2& p) const;

private:
    std::vector<Vec2> vertices_;
    double diameter_ = 0.0;
};

// Union of boundary vertices and boundary segments describing the Dirichlet set.
struct BoundarySubset {
    std::vector<std::array<Vec2, 2>> segments;
    std::vector<Vec2> points;

    static BoundarySubset whole_boundary(const Domain& d);
    static BoundarySubset edges(const Domain& d, const std::vector<int>& edge_ids);
    static BoundarySubset at_points(std::vector<Vec2> pts);

    bool empty() const { return segments.empty() && points.empty(); }
    bool contains(const Vec2& p, double tol) const;
    double distance(const Vec2& p) const;
};

class Grid {
public:
    double h = 0.0;
    Domain domain;
    BoundarySubset sigma0;
    std::vector<Vec2> nodes;           // lexicographic by (y, x)
    std::vector<std::uint8_t> boundary;
    std::vector<std::uint8_t> dirichlet;

    int size() const { return static_cast<int>(nodes.size()); }
    int dirichlet_count() const;
    // Index of node at p (within tol), -1 if absent.
    int find_node(const Vec2& p, double tol) const;
    // Nearest node; ties resolved toward the lowest index.
    int nearest_node(const Vec2& p) const;
};

struct PairSet {
    std::vector<int> a;        // tail, a[e] < b[e]
    std::vector<int> b;        // head
    std::vector<double> length;
    std::vector<Vec2> dir;     // unit vector node a -> node b

    int size() const { return static_cast<int>(a.size()); }
    void push(const Grid& g, int i, int j);
};

struct PairRule {
    enum class Kind { Full, Radius, KNearest };
    Kind kind = Kind::Full;
    double radius = 0.0;
    int k = 0;

    static PairRule full() { return {Kind::Full, 0.0, 0}; }
    static PairRule within_radius(double r) { return {Kind::Radius, r, 0}; }
    static PairRule k_nearest(int k) { return {Kind::KNearest, 0.0, k}; }
};

struct LoadSpec {
    struct PointMass {
        Vec2 at;
        double mass = 0.0;
    };
    struct LineDensity {
        Vec2 a, b;
        double density = 0.0; // mass per unit length
    };

    std::vector<PointMass> points;
    double density = 0.0;     // constant area density over the domain
    std::vector<LineDensity> lines;

    double total_mass(const Domain& d) const;
    bool nonnegative() const;
};

struct DiscreteLoad {
    std::vector<double> weights; // per node; zero on Dirichlet nodes
    double absorbed = 0.0;       // distributed mass that fell on Dirichlet nodes
    std::string origin;

    double total() const;
    bool nonnegative() const;
};

Grid build_grid(const Domain& domain, double h, const BoundarySubset& sigma0);
PairSet build_pairs(const Grid& grid, const PairRule& rule);
DiscreteLoad discretize_load(const Grid& grid, const LoadSpec& load);

// Exact clip of the node cell (node + h*[-1/2,1/2]^2) against the domain.
// Returns area and centroid of the clipped cell (centroid = node for empty cells).
void clipped_cell(const Grid& grid, int node, double& area, Vec2& centroid);

namespace detail {
double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b);
// Splits [a,b] at half-grid lines; calls f(t0, t1, owner_cell_center) per piece.
void walk_cells(const Vec2& a, const Vec2& b, double h,
                const std::function<void(double, double, Vec2)>& f);
} // namespace detail

} // namespace om
