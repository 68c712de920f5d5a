#pragma once

#include "om/membrane.hpp"

#include <iosfwd>

namespace om {

// Key-value run configuration; unknown keys are rejected.
struct RunConfig {
    std::string domain_kind = "square"; // square | rectangle | polygon | regular
    double rect_w = 1.0, rect_h = 1.0;
    int regular_n = 16;
    double regular_r = 1.0;
    std::vector<Vec2> polygon;

    double h = 0.125;

    std::string sigma0_kind = "boundary"; // boundary | edges | points
    std::vector<int> sigma0_edges;
    std::vector<Vec2> sigma0_points;

    LoadSpec load;

    PairRule pairs = PairRule::full();
    bool colgen = true;
    double gap_tol = 1e-6;
    double feas_tol = 1e-7;
    long max_iter = 200000;
    double violation_tol = -1.0;

    Vec2 source{}, target{};
    bool has_source = false, has_target = false;
    std::string solution_path;

    std::string oracle_kind; // radial-uniform | radial-dirac | oneforce-disk | oneforce-rect
    std::vector<double> oracle_args;

    std::string out_dir = "out";

    Domain make_domain() const;
    BoundarySubset make_sigma0(const Domain& d) const;
    Grid make_grid() const;
    SolveOmOptions make_om_options() const;
};

RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);

} // namespace om
