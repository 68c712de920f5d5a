#include "om/config.hpp"

#include <fstream>
#include <sstream>

namespace om {

namespace {

std::vector<std::string> tokens(const std::string& s) {
    std::string t = s;
    for (char& c : t)
        if (c == ',') c = ' ';
    std::istringstream iss(t);
    std::vector<std::string> out;
    std::string tok;
    while (iss >> tok) out.push_back(tok);
    return out;
}

double num(const std::string& s, const std::string& key) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw Error("config: bad number '" + s + "' for key '" + key + "'");
    }
}

} // namespace

RunConfig parse_config(std::istream& in) {
    RunConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            if (!tokens(line).empty())
                throw Error("config: line " + std::to_string(lineno) + " has no '='");
            continue;
        }
        std::string key = line.substr(0, eq);
        key.erase(0, key.find_first_not_of(" \t"));
        key.erase(key.find_last_not_of(" \t") + 1);
        std::vector<std::string> val = tokens(line.substr(eq + 1));
        if (key.empty()) throw Error("config: empty key on line " + std::to_string(lineno));

        auto need = [&](std::size_t n) {
            if (val.size() != n)
                throw Error("config: key '" + key + "' expects " + std::to_string(n) +
                            " values, got " + std::to_string(val.size()));
        };

        if (key == "domain") {
            if (val.empty()) throw Error("config: empty domain");
            cfg.domain_kind = val[0];
            if (val[0] == "square") {
                need(1);
            } else if (val[0] == "rectangle") {
                need(3);
                cfg.rect_w = num(val[1], key);
                cfg.rect_h = num(val[2], key);
            } else if (val[0] == "regular") {
                need(3);
                cfg.regular_n = static_cast<int>(num(val[1], key));
                cfg.regular_r = num(val[2], key);
            } else if (val[0] == "polygon") {
                if (val.size() < 7 || (val.size() - 1) % 2 != 0)
                    throw Error("config: polygon needs at least 3 x,y vertices");
                cfg.polygon.clear();
                for (std::size_t i = 1; i + 1 < val.size(); i += 2)
                    cfg.polygon.push_back({num(val[i], key), num(val[i + 1], key)});
            } else {
                throw Error("config: unknown domain kind '" + val[0] + "'");
            }
        } else if (key == "h") {
            need(1);
            cfg.h = num(val[0], key);
        } else if (key == "sigma0") {
            if (val.empty()) throw Error("config: empty sigma0");
            cfg.sigma0_kind = val[0];
            if (val[0] == "boundary") {
                need(1);
            } else if (val[0] == "edges") {
                cfg.sigma0_edges.clear();
                for (std::size_t i = 1; i < val.size(); ++i)
                    cfg.sigma0_edges.push_back(static_cast<int>(num(val[i], key)));
                if (cfg.sigma0_edges.empty()) throw Error("config: sigma0 edges empty");
            } else if (val[0] == "points") {
                if (val.size() < 3 || (val.size() - 1) % 2 != 0)
                    throw Error("config: sigma0 points need x,y pairs");
                cfg.sigma0_points.clear();
                for (std::size_t i = 1; i + 1 < val.size(); i += 2)
                    cfg.sigma0_points.push_back({num(val[i], key), num(val[i + 1], key)});
            } else {
                throw Error("config: unknown sigma0 kind '" + val[0] + "'");
            }
        } else if (key == "load") {
            if (val.empty()) throw Error("config: empty load");
            if (val[0] == "point") {
                need(4);
                cfg.load.points.push_back({{num(val[1], key), num(val[2], key)}, num(val[3], key)});
            } else if (val[0] == "density") {
                need(2);
                cfg.load.density = num(val[1], key);
            } else if (val[0] == "line") {
                need(6);
                cfg.load.lines.push_back({{num(val[1], key), num(val[2], key)},
                                          {num(val[3], key), num(val[4], key)},
                                          num(val[5], key)});
            } else {
                throw Error("config: unknown load kind '" + val[0] + "'");
            }
        } else if (key == "pairs") {
            if (val.empty()) throw Error("config: empty pairs");
            if (val[0] == "full") {
                need(1);
                cfg.pairs = PairRule::full();
            } else if (val[0] == "radius") {
                need(2);
                cfg.pairs = PairRule::within_radius(num(val[1], key));
            } else if (val[0] == "knn") {
                need(2);
                cfg.pairs = PairRule::k_nearest(static_cast<int>(num(val[1], key)));
            } else {
                throw Error("config: unknown pair strategy '" + val[0] + "'");
            }
        } else if (key == "colgen") {
            need(1);
            if (val[0] == "on")
                cfg.colgen = true;
            else if (val[0] == "off")
                cfg.colgen = false;
            else
                throw Error("config: colgen must be on or off");
        } else if (key == "gap_tol") {
            need(1);
            cfg.gap_tol = num(val[0], key);
        } else if (key == "feas_tol") {
            need(1);
            cfg.feas_tol = num(val[0], key);
        } else if (key == "max_iter") {
            need(1);
            cfg.max_iter = static_cast<long>(num(val[0], key));
        } else if (key == "violation_tol") {
            need(1);
            cfg.violation_tol = num(val[0], key);
        } else if (key == "source") {
            need(2);
            cfg.source = {num(val[0], key), num(val[1], key)};
            cfg.has_source = true;
        } else if (key == "target") {
            need(2);
            cfg.target = {num(val[0], key), num(val[1], key)};
            cfg.has_target = true;
        } else if (key == "solution") {
            need(1);
            cfg.solution_path = val[0];
        } else if (key == "oracle") {
            if (val.empty()) throw Error("config: empty oracle");
            cfg.oracle_kind = val[0];
            cfg.oracle_args.clear();
            for (std::size_t i = 1; i < val.size(); ++i)
                cfg.oracle_args.push_back(num(val[i], key));
        } else if (key == "out") {
            need(1);
            cfg.out_dir = val[0];
        } else {
            throw Error("config: unknown key '" + key + "'");
        }
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("config: cannot open '" + path + "'");
    return parse_config(in);
}

Domain RunConfig::make_domain() const {
    if (domain_kind == "square") return Domain::unit_square();
    if (domain_kind == "rectangle") return Domain::rectangle(rect_w, rect_h);
    if (domain_kind == "regular") return Domain::regular_polygon(regular_n, regular_r);
    if (domain_kind == "polygon") return Domain::polygon(polygon);
    throw Error("config: unknown domain kind '" + domain_kind + "'");
}

BoundarySubset RunConfig::make_sigma0(const Domain& d) const {
    if (sigma0_kind == "boundary") return BoundarySubset::whole_boundary(d);
    if (sigma0_kind == "edges") return BoundarySubset::edges(d, sigma0_edges);
    if (sigma0_kind == "points") return BoundarySubset::at_points(sigma0_points);
    throw Error("config: unknown sigma0 kind '" + sigma0_kind + "'");
}

Grid RunConfig::make_grid() const {
    Domain d = make_domain();
    return build_grid(d, h, make_sigma0(d));
}

SolveOmOptions RunConfig::make_om_options() const {
    SolveOmOptions opts;
    opts.pairs = pairs;
    opts.column_generation = colgen;
    opts.violation_tol = violation_tol;
    opts.solver.gap_tol = gap_tol;
    opts.solver.feas_tol = feas_tol;
    opts.solver.max_iter = max_iter;
    return opts;
}

} // namespace om
