#include "om/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace om {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

} // namespace

std::string export_svg(const MembraneSolution& sol, const SvgOptions& opts) {
    const Grid& grid = sol.grid;
    double minx = 1e300, maxx = -1e300, miny = 1e300, maxy = -1e300;
    for (const auto& v : grid.domain.vertices()) {
        minx = std::min(minx, v.x);
        maxx = std::max(maxx, v.x);
        miny = std::min(miny, v.y);
        maxy = std::max(maxy, v.y);
    }
    const double margin = 0.05 * std::max(maxx - minx, maxy - miny);
    minx -= margin;
    maxx += margin;
    miny -= margin;
    maxy += margin;
    const double scale = opts.max_width_px / (maxx - minx);
    const double height = (maxy - miny) * scale;
    auto X = [&](double x) { return (x - minx) * scale; };
    auto Y = [&](double y) { return height - (y - miny) * scale; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opts.max_width_px
       << "\" height=\"" << fmt(height) << "\" viewBox=\"0 0 " << opts.max_width_px << " "
       << fmt(height) << "\">\n";

    if (opts.draw_u_raster) {
        double umax = 0.0;
        for (double u : sol.u) umax = std::max(umax, std::abs(u));
        os << "<g id=\"u-raster\">\n";
        if (umax > 0.0) {
            const double hh = 0.5 * grid.h * scale;
            for (int i = 0; i < grid.size(); ++i) {
                double rel = std::abs(sol.u[i]) / umax;
                if (rel < 1e-3) continue;
                int shade = static_cast<int>(std::lround(255.0 * (1.0 - 0.75 * rel)));
                os << "<rect x=\"" << fmt(X(grid.nodes[i].x) - hh) << "\" y=\""
                   << fmt(Y(grid.nodes[i].y) - hh) << "\" width=\"" << fmt(2 * hh)
                   << "\" height=\"" << fmt(2 * hh) << "\" fill=\"rgb(" << shade << "," << shade
                   << "," << shade << ")\"/>\n";
            }
        }
        os << "</g>\n";
    }

    os << "<g id=\"domain\"><polygon points=\"";
    for (const auto& v : grid.domain.vertices()) os << fmt(X(v.x)) << "," << fmt(Y(v.y)) << " ";
    os << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/></g>\n";

    os << "<g id=\"strings\">\n";
    if (sol.truss.max_Pi > 0.0) {
        for (const auto& te : sol.truss.entries) {
            int e = te.pair;
            Vec2 a = grid.nodes[sol.active_pairs.a[e]];
            Vec2 b = grid.nodes[sol.active_pairs.b[e]];
            double width = opts.max_stroke_px * te.Pi / sol.truss.max_Pi;
            os << "<line x1=\"" << fmt(X(a.x)) << "\" y1=\"" << fmt(Y(a.y)) << "\" x2=\""
               << fmt(X(b.x)) << "\" y2=\"" << fmt(Y(b.y)) << "\" stroke=\"#1040a0\""
               << " stroke-width=\"" << fmt(width) << "\" stroke-linecap=\"round\"/>\n";
            if (te.pi != 0.0) {
                // Arrowhead at 2/3 of the segment, oriented by sign(pi).
                Vec2 tau = sol.active_pairs.dir[e] * (te.pi > 0.0 ? 1.0 : -1.0);
                Vec2 tip = a + (b - a) * (2.0 / 3.0);
                Vec2 n{-tau.y, tau.x};
                double s = 4.0 / scale;
                Vec2 p1 = tip + tau * (1.5 * s);
                Vec2 p2 = tip + n * s - tau * s;
                Vec2 p3 = tip - n * s - tau * s;
                os << "<polygon points=\"" << fmt(X(p1.x)) << "," << fmt(Y(p1.y)) << " "
                   << fmt(X(p2.x)) << "," << fmt(Y(p2.y)) << " " << fmt(X(p3.x)) << ","
                   << fmt(Y(p3.y)) << "\" fill=\"#c03020\"/>\n";
            }
        }
    }
    os << "</g>\n</svg>\n";
    return os.str();
}

} // namespace om
