#include "om/serialize.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

namespace om {

using nlohmann::json;

namespace {

json vec_list(const std::vector<Vec2>& v) {
    json out = json::array();
    for (const auto& p : v) out.push_back({p.x, p.y});
    return out;
}

std::vector<Vec2> vec_list_from(const json& j) {
    std::vector<Vec2> out;
    for (const auto& p : j) out.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    return out;
}

} // namespace

json solution_to_json(const MembraneSolution& sol) {
    json j;
    j["schema"] = kSolutionSchema;
    j["h"] = sol.grid.h;
    j["domain"] = vec_list(sol.grid.domain.vertices());
    json sig;
    sig["segments"] = json::array();
    for (const auto& s : sol.grid.sigma0.segments)
        sig["segments"].push_back({{s[0].x, s[0].y}, {s[1].x, s[1].y}});
    sig["points"] = vec_list(sol.grid.sigma0.points);
    j["sigma0"] = sig;
    j["nodes"] = vec_list(sol.grid.nodes);
    j["boundary"] = sol.grid.boundary;
    j["dirichlet"] = sol.grid.dirichlet;
    j["load"] = sol.load_weights;
    json strings = json::array();
    for (int e = 0; e < sol.active_pairs.size(); ++e)
        strings.push_back({sol.active_pairs.a[e], sol.active_pairs.b[e], sol.Pi[e], sol.pi[e]});
    j["strings"] = strings;
    j["u"] = sol.u;
    json w = json::array();
    for (const auto& p : sol.w) w.push_back({p.x, p.y});
    j["w"] = w;
    j["Z0"] = sol.Z0;
    j["dual_value"] = sol.dual_value;
    j["gap"] = sol.report.relative_gap;
    j["gap_tol"] = sol.gap_tol;
    j["feas_tol"] = sol.feas_tol;
    j["report"] = {{"primal_objective", sol.report.primal_objective},
                   {"dual_objective", sol.report.dual_objective},
                   {"relative_gap", sol.report.relative_gap},
                   {"primal_residual", sol.report.primal_residual},
                   {"dual_residual", sol.report.dual_residual},
                   {"iterations", sol.report.iterations}};
    return j;
}

MembraneSolution solution_from_json(const json& j) {
    if (!j.contains("schema") || j.at("schema").get<std::string>() != kSolutionSchema)
        throw Error("solution: unknown or missing schema version");
    MembraneSolution sol;
    sol.grid.h = j.at("h").get<double>();
    sol.grid.domain = Domain::polygon(vec_list_from(j.at("domain")));
    for (const auto& s : j.at("sigma0").at("segments"))
        sol.grid.sigma0.segments.push_back(
            {Vec2{s.at(0).at(0).get<double>(), s.at(0).at(1).get<double>()},
             Vec2{s.at(1).at(0).get<double>(), s.at(1).at(1).get<double>()}});
    sol.grid.sigma0.points = vec_list_from(j.at("sigma0").at("points"));
    sol.grid.nodes = vec_list_from(j.at("nodes"));
    sol.grid.boundary = j.at("boundary").get<std::vector<std::uint8_t>>();
    sol.grid.dirichlet = j.at("dirichlet").get<std::vector<std::uint8_t>>();
    sol.load_weights = j.at("load").get<std::vector<double>>();
    for (const auto& s : j.at("strings")) {
        int a = s.at(0).get<int>(), b = s.at(1).get<int>();
        sol.active_pairs.push(sol.grid, a, b);
        sol.Pi.push_back(s.at(2).get<double>());
        sol.pi.push_back(s.at(3).get<double>());
        double Pi = sol.Pi.back(), pi = sol.pi.back();
        sol.t.push_back(Pi > 0.0 ? pi * pi / (2.0 * Pi) : 0.0);
    }
    sol.u = j.at("u").get<std::vector<double>>();
    sol.w = vec_list_from(j.at("w"));
    sol.Z0 = j.at("Z0").get<double>();
    sol.dual_value = j.at("dual_value").get<double>();
    sol.gap_tol = j.at("gap_tol").get<double>();
    sol.feas_tol = j.at("feas_tol").get<double>();
    const auto& rep = j.at("report");
    sol.report.primal_objective = rep.at("primal_objective").get<double>();
    sol.report.dual_objective = rep.at("dual_objective").get<double>();
    sol.report.relative_gap = rep.at("relative_gap").get<double>();
    sol.report.primal_residual = rep.at("primal_residual").get<double>();
    sol.report.dual_residual = rep.at("dual_residual").get<double>();
    sol.report.iterations = rep.at("iterations").get<long>();
    sol.report.status = SolveStatus::Optimal;

    double max_Pi = 0.0;
    for (double v : sol.Pi) max_Pi = std::max(max_Pi, v);
    sol.truss.max_Pi = max_Pi;
    for (int e = 0; e < sol.active_pairs.size(); ++e) {
        if (sol.Pi[e] > 0.0 && sol.Pi[e] >= 1e-6 * max_Pi)
            sol.truss.entries.push_back({e, sol.Pi[e], sol.pi[e], sol.pi[e] / sol.Pi[e]});
        sol.length_mass += sol.active_pairs.length[e] * sol.Pi[e];
        sol.transport_mass += sol.active_pairs.length[e] * sol.t[e];
    }
    return sol;
}

json fmd_to_json(const FmdSolution& fmd) {
    static const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    json j;
    j["schema"] = "om-fmd/1";
    j["Z"] = fmd.Z;
    json rays = json::array();
    for (const auto& r : fmd.rays)
        rays.push_back({{"from", {r.from.x, r.from.y}},
                        {"to", {r.to.x, r.to.y}},
                        {"mass", r.mass},
                        {"sigma_weight", r.mass * inv_sqrt2}});
    j["strings"] = rays;
    return j;
}

json optimality_to_json(const OptimalityRecord& rec) {
    return {{"schema", "om-residuals/1"},
            {"boundary_values", rec.boundary_values},
            {"admissibility", rec.admissibility},
            {"two_point", rec.two_point},
            {"alpha_consistency", rec.alpha_consistency},
            {"support_tightness", rec.support_tightness}};
}

void write_text_atomic(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("io: cannot write '" + tmp + "'");
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("io: cannot open '" + path + "'");
    json j;
    in >> j;
    return j;
}

} // namespace om
