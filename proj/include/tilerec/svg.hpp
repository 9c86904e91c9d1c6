#pragma once

// Static SVG rendering of tiling windows: one filled polygon per tile,
// colored by prototile. A certificate overlay outlines the base patch and
// each dilated copy, and draws the pattern vectors n*u_i as arrows.

#include <cstdio>
#include <string>
#include <vector>

#include "tilerec/recurrence.hpp"
#include "tilerec/tiling.hpp"

namespace tilerec {

namespace detail {

inline std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

inline std::string proto_color(std::size_t index, std::size_t count) {
    const double hue = 360.0 * static_cast<double>(index) / std::max<std::size_t>(count, 1);
    return "hsl(" + fmt(hue) + ",55%,72%)";
}

inline std::string polygon_points(const Polygon& poly) {
    std::string out;
    for (Vec2 v : poly) {
        if (!out.empty()) out += " ";
        out += fmt(v.x) + "," + fmt(-v.y);  // SVG y grows downward
    }
    return out;
}

}  // namespace detail

inline std::string render_svg(const TilingWindow& w,
                              const WitnessCertificate* cert = nullptr,
                              const PatternF* pattern = nullptr) {
    const double r = w.radius() + 1.0;
    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" + detail::fmt(-r) + " " +
           detail::fmt(-r) + " " + detail::fmt(2 * r) + " " + detail::fmt(2 * r) + "\">\n";
    svg += "<defs><marker id=\"arrow\" markerWidth=\"8\" markerHeight=\"8\" refX=\"6\" "
           "refY=\"3\" orient=\"auto\"><path d=\"M0,0 L6,3 L0,6 z\" fill=\"#222\"/></marker>"
           "</defs>\n";

    const std::size_t nproto = w.prototiles().size();
    for (std::size_t i = 0; i < w.tiles().size(); ++i) {
        svg += "<polygon points=\"" + detail::polygon_points(w.tile_polygon(i)) + "\" fill=\"" +
               detail::proto_color(static_cast<std::size_t>(w.tiles()[i].proto), nproto) +
               "\" stroke=\"#333\" stroke-width=\"0.02\"/>\n";
    }

    if (cert && pattern) {
        const auto outline = [&](const Isometry2& motion, const char* color) {
            svg += "<g class=\"patch-outline\" fill=\"none\" stroke=\"" + std::string(color) +
                   "\" stroke-width=\"0.12\">\n";
            for (std::size_t i = 0; i < cert->patch.size(); ++i) {
                svg += "<polygon points=\"" +
                       detail::polygon_points(apply_isometry(motion, cert->patch.tile_polygon(i))) +
                       "\"/>\n";
            }
            svg += "</g>\n";
        };
        outline(Isometry2::identity(), "#c40000");
        for (std::size_t i = 0; i < pattern->vectors.size(); ++i) {
            Isometry2 motion;
            const Vec2 shift = static_cast<double>(cert->n) * pattern->vectors[i];
            if (cert->variant == TheoremVariant::thm1) {
                motion = Isometry2::translate(shift + cert->corrections[i].translation);
            } else if (cert->variant == TheoremVariant::thm2) {
                motion = Isometry2::translate(shift + cert->base)
                             .compose(cert->corrections[i])
                             .compose(Isometry2::translate(-cert->base));
            } else {
                // Per-tile motions: outline with the first tile's correction,
                // close enough for a picture of where the copy landed.
                motion = Isometry2::translate(shift + cert->base)
                             .compose(cert->per_tile[i].front())
                             .compose(Isometry2::translate(-cert->base));
            }
            outline(motion, "#00589c");
            const Vec2 tip = cert->base + shift;
            svg += "<line x1=\"" + detail::fmt(cert->base.x) + "\" y1=\"" +
                   detail::fmt(-cert->base.y) + "\" x2=\"" + detail::fmt(tip.x) + "\" y2=\"" +
                   detail::fmt(-tip.y) +
                   "\" stroke=\"#222\" stroke-width=\"0.08\" marker-end=\"url(#arrow)\"/>\n";
        }
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace tilerec
