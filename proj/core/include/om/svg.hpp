#pragma once

#include "om/membrane.hpp"

namespace om {

struct SvgOptions {
    int max_width_px = 640;
    double max_stroke_px = 6.0;
    bool draw_u_raster = true;
};

// Deterministic SVG: u as a grayscale cell raster under strings whose width is
// proportional to Pi, with arrowheads oriented by the sign of pi.
std::string export_svg(const MembraneSolution& sol, const SvgOptions& opts = {});

} // namespace om
