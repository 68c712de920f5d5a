#include "om/config.hpp"
#include "om/fmd.hpp"
#include "om/membrane.hpp"
#include "om/metric.hpp"
#include "om/oracle.hpp"
#include "om/serialize.hpp"
#include "om/svg.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <sstream>

namespace {

using nlohmann::json;

struct CommonFlags {
    std::string config_path;
    std::string out_dir;
    std::string solution_path;
    double tol = -1.0;
    std::string pairs;
    bool no_colgen = false;
    bool trace = false;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool config_required = true) {
    auto* c = cmd->add_option("--config", f.config_path, "run configuration file");
    if (config_required) c->required();
    cmd->add_option("--out", f.out_dir, "output directory");
    cmd->add_option("--tol", f.tol, "gap tolerance override");
    cmd->add_option("--pairs", f.pairs, "pair strategy: full | radius=R | knn=K");
    cmd->add_flag("--no-colgen", f.no_colgen, "disable column generation");
    cmd->add_flag("--trace", f.trace, "write an iteration trace CSV");
    cmd->add_option("--solution", f.solution_path, "solution JSON input");
}

om::RunConfig make_config(const CommonFlags& f) {
    om::RunConfig cfg;
    if (!f.config_path.empty()) cfg = om::load_config(f.config_path);
    if (!f.out_dir.empty()) cfg.out_dir = f.out_dir;
    if (f.tol > 0.0) cfg.gap_tol = f.tol;
    if (!f.solution_path.empty()) cfg.solution_path = f.solution_path;
    if (f.no_colgen) cfg.colgen = false;
    if (!f.pairs.empty()) {
        if (f.pairs == "full") {
            cfg.pairs = om::PairRule::full();
        } else if (f.pairs.rfind("radius=", 0) == 0) {
            cfg.pairs = om::PairRule::within_radius(std::stod(f.pairs.substr(7)));
        } else if (f.pairs.rfind("knn=", 0) == 0) {
            cfg.pairs = om::PairRule::k_nearest(std::stoi(f.pairs.substr(4)));
        } else {
            throw om::Error("bad --pairs value '" + f.pairs + "'");
        }
    }
    return cfg;
}

std::filesystem::path ensure_out(const om::RunConfig& cfg) {
    std::filesystem::path dir(cfg.out_dir);
    std::filesystem::create_directories(dir);
    return dir;
}

void write_json(const std::filesystem::path& path, const json& j) {
    om::write_text_atomic(path.string(), j.dump(2) + "\n");
}

std::string u_csv(const om::MembraneSolution& sol) {
    std::ostringstream os;
    os.precision(17);
    os << "x,y,u,wx,wy\n";
    for (int i = 0; i < sol.grid.size(); ++i)
        os << sol.grid.nodes[i].x << "," << sol.grid.nodes[i].y << "," << sol.u[i] << ","
           << sol.w[i].x << "," << sol.w[i].y << "\n";
    return os.str();
}

int run_solve(const CommonFlags& flags) {
    om::RunConfig cfg = make_config(flags);
    auto dir = ensure_out(cfg);
    om::Grid grid = cfg.make_grid();
    om::DiscreteLoad load = om::discretize_load(grid, cfg.load);
    om::SolveOmOptions opts = cfg.make_om_options();
    if (flags.trace) opts.trace_csv = (dir / "trace.csv").string();
    om::MembraneSolution sol = om::solve_om(grid, load, opts);
    write_json(dir / "solution.json", om::solution_to_json(sol));
    om::write_text_atomic((dir / "sigma.svg").string(), om::export_svg(sol));
    om::write_text_atomic((dir / "u.csv").string(), u_csv(sol));
    std::cout << "Z0 " << sol.Z0 << " gap " << sol.report.relative_gap << " iterations "
              << sol.report.iterations << " rounds " << sol.rounds << "\n";
    return 0;
}

int run_fmd(const CommonFlags& flags) {
    om::RunConfig cfg = make_config(flags);
    auto dir = ensure_out(cfg);
    om::Grid grid = cfg.make_grid();
    om::DiscreteLoad load = om::discretize_load(grid, cfg.load);
    om::FmdSolution fmd = om::solve_fmd(grid, load);
    write_json(dir / "fmd.json", om::fmd_to_json(fmd));
    std::cout << "Z " << fmd.Z << " rays " << fmd.rays.size() << "\n";
    return 0;
}

int run_compare(const CommonFlags& flags) {
    om::RunConfig cfg = make_config(flags);
    auto dir = ensure_out(cfg);
    om::Grid grid = cfg.make_grid();
    om::DiscreteLoad load = om::discretize_load(grid, cfg.load);
    om::FmdCompareResult cmp = om::compare_fmd_om(grid, load, cfg.make_om_options());
    json j;
    j["schema"] = "om-compare/1";
    j["Z_fmd"] = cmp.Z_fmd;
    j["Z0_om"] = cmp.Z0_om;
    j["equal"] = cmp.equal;
    j["ridge"] = json::array();
    for (const auto& [pt, member] : cmp.ridge)
        j["ridge"].push_back({{"point", {pt.x, pt.y}}, {"member", member}});
    write_json(dir / "compare.json", j);
    std::cout << "Z_fmd " << cmp.Z_fmd << " Z0 " << cmp.Z0_om << " equal "
              << (cmp.equal ? "true" : "false") << "\n";
    return 0;
}

om::MetricGraph metric_graph_from(const om::RunConfig& cfg, om::Grid& grid_out) {
    if (!cfg.solution_path.empty()) {
        om::MembraneSolution sol = om::solution_from_json(om::read_json_file(cfg.solution_path));
        grid_out = sol.grid;
        return om::MetricGraph::from_solution(sol);
    }
    grid_out = cfg.make_grid();
    std::vector<om::Vec2> v = grid_out.nodes; // identity map
    return om::MetricGraph::from_v(grid_out, om::build_pairs(grid_out, cfg.pairs), std::move(v));
}

int run_metric(const CommonFlags& flags) {
    om::RunConfig cfg = make_config(flags);
    auto dir = ensure_out(cfg);
    if (!cfg.has_source) throw om::Error("metric: config needs a 'source' point");
    om::Grid grid;
    om::MetricGraph g = metric_graph_from(cfg, grid);
    int src = grid.nearest_node(cfg.source);
    std::vector<double> dist = om::c_v_distance(g, src);
    std::ostringstream os;
    os.precision(17);
    os << "x,y,c_v\n";
    for (int i = 0; i < grid.size(); ++i)
        os << grid.nodes[i].x << "," << grid.nodes[i].y << "," << dist[i] << "\n";
    om::write_text_atomic((dir / "metric.csv").string(), os.str());
    std::cout << "source node " << src << " max distance "
              << *std::max_element(dist.begin(), dist.end()) << "\n";
    return 0;
}

int run_geodesic(const CommonFlags& flags) {
    om::RunConfig cfg = make_config(flags);
    auto dir = ensure_out(cfg);
    if (!cfg.has_source || !cfg.has_target)
        throw om::Error("geodesic: config needs 'source' and 'target' points");
    om::Grid grid;
    om::MetricGraph g = metric_graph_from(cfg, grid);
    int a = grid.nearest_node(cfg.source);
    int b = grid.nearest_node(cfg.target);
    std::vector<int> path = om::geodesic(g, a, b);
    std::ostringstream os;
    os.precision(17);
    os << "x,y\n";
    for (int node : path) os << grid.nodes[node].x << "," << grid.nodes[node].y << "\n";
    om::write_text_atomic((dir / "geodesic.csv").string(), os.str());
    std::cout << "path nodes " << path.size() << "\n";
    return 0;
}

int run_oracle(const CommonFlags& flags) {
    om::RunConfig cfg = make_config(flags);
    auto dir = ensure_out(cfg);
    if (cfg.oracle_kind.rfind("radial", 0) == 0) {
        if (cfg.oracle_args.empty()) throw om::Error("oracle: radial needs a radius");
        double R = cfg.oracle_args[0];
        om::RadialLoad load = cfg.oracle_kind == "radial-dirac" ? om::RadialLoad::center_dirac()
                                                                : om::RadialLoad::uniform();
        om::RadialSolution sol = om::radial(R, load);
        json j;
        j["schema"] = "om-radial/1";
        j["R"] = sol.R;
        j["D"] = sol.D;
        j["Z0"] = sol.Z0;
        j["identity_residual"] = sol.radial_identity_residual();
        json samples = json::array();
        for (int i = 0; i <= 100; ++i) {
            double r = i * R / 100.0;
            samples.push_back({r, sol.u(r), sol.w(r)});
        }
        j["samples"] = samples;
        write_json(dir / "radial.json", j);
        std::cout << "D " << sol.D << " Z0 " << sol.Z0 << "\n";
        return 0;
    }
    if (cfg.oracle_kind == "oneforce") {
        if (cfg.oracle_args.size() != 2) throw om::Error("oracle: oneforce needs x0 coordinates");
        om::Vec2 x0{cfg.oracle_args[0], cfg.oracle_args[1]};
        om::OneForceDomain ofd;
        if (cfg.domain_kind == "square")
            ofd = om::OneForceDomain::square(1.0);
        else if (cfg.domain_kind == "rectangle")
            ofd = om::OneForceDomain::rectangle(cfg.rect_w, cfg.rect_h);
        else
            throw om::Error("oracle: oneforce supports square and rectangle domains");
        om::OneForceSolution of = om::one_force(ofd, x0);
        om::Grid grid = cfg.make_grid();
        om::PairSet pairs = om::build_pairs(grid, om::PairRule::full());
        om::MembraneSolution sol = of.to_solution(grid, pairs);
        write_json(dir / "solution.json", om::solution_to_json(sol));
        om::write_text_atomic((dir / "sigma.svg").string(), om::export_svg(sol));
        std::cout << "energy " << of.energy << " d0 " << of.d0 << "\n";
        return 0;
    }
    throw om::Error("oracle: unknown kind '" + cfg.oracle_kind + "'");
}

int run_check(const CommonFlags& flags) {
    om::RunConfig cfg = make_config(flags);
    auto dir = ensure_out(cfg);
    if (cfg.solution_path.empty()) throw om::Error("check: needs --solution or 'solution' key");
    om::MembraneSolution sol = om::solution_from_json(om::read_json_file(cfg.solution_path));
    om::OptimalityRecord rec = om::check_optimality(sol);
    double tol = flags.tol > 0.0 ? flags.tol : 1e-8;
    json j = om::optimality_to_json(rec);
    j["tol"] = tol;
    j["pass"] = rec.pass(tol);
    write_json(dir / "residuals.json", j);
    std::cout << j.dump(2) << "\n";
    return rec.pass(tol) ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimal pre-stressed membrane toolkit"};
    app.require_subcommand(1);

    CommonFlags flags;
    auto* solve_cmd = app.add_subcommand("solve", "solve the optimal membrane problem");
    add_common(solve_cmd, flags);
    auto* fmd_cmd = app.add_subcommand("fmd", "free material design baseline");
    add_common(fmd_cmd, flags);
    auto* compare_cmd = app.add_subcommand("compare", "compare FMD and membrane values");
    add_common(compare_cmd, flags);
    auto* metric_cmd = app.add_subcommand("metric", "distance field of the monotone-map metric");
    add_common(metric_cmd, flags);
    auto* geo_cmd = app.add_subcommand("geodesic", "geodesic polyline between two points");
    add_common(geo_cmd, flags);
    auto* oracle_cmd = app.add_subcommand("oracle", "closed-form reference solutions");
    add_common(oracle_cmd, flags);
    auto* check_cmd = app.add_subcommand("check", "verify optimality residuals of a solution");
    add_common(check_cmd, flags, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve_cmd->parsed()) return run_solve(flags);
        if (fmd_cmd->parsed()) return run_fmd(flags);
        if (compare_cmd->parsed()) return run_compare(flags);
        if (metric_cmd->parsed()) return run_metric(flags);
        if (geo_cmd->parsed()) return run_geodesic(flags);
        if (oracle_cmd->parsed()) return run_oracle(flags);
        if (check_cmd->parsed()) return run_check(flags);
    } catch (const std::exception& e) {
        json err;
        err["error"] = e.what();
        std::cout << err.dump() << "\n";
        return 1;
    }
    return 1;
}
