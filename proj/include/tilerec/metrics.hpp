#pragma once

// The four tiling metrics. metric_general evaluates the supremum metric
// d(x,y) = sup_n (1/n) d_H(B_n ∂x, B_n ∂y) over a finite truncation with a
// certified interval; d1/d2/d3 decide, per radius level r, whether the
// defining witness exists and report the bisection interval.
//
// All three adapted metrics are decided by a sufficient procedure (minimal
// inflated patch, candidate transforms from tile alignments), so `upper` is
// always a true upper bound for the metric while `lower` is the largest
// tested level with no witness found.

#include <cmath>
#include <string>

#include "tilerec/generators.hpp"
#include "tilerec/parallel.hpp"
#include "tilerec/tiling.hpp"

namespace tilerec {

inline constexpr double kMetricCap = 0.70710678118654752440;  // 1/sqrt(2)

struct MetricResult {
    double lower = 0.0;
    double upper = 0.0;
    double truncation_radius = 0.0;
    std::string notes;
};

struct MetricOptions {
    double grid_step = 1e-3;  // bisection resolution for d1/d2/d3
    unsigned threads = 0;
    double tol_geom = 1e-9;
};

// Certified truncation of the supremum metric. The tail bound rests on the
// fact that every point of the plane lies within D_max of each skeleton and
// a radial retraction by 2 D_max keeps the witness inside B_n, so
// d_H(B_n ∂x, B_n ∂y) <= 4 D_max for every n and the n > N tail contributes
// at most 4 D_max / N.
inline MetricResult metric_general(const WindowProviderPtr& x, const WindowProviderPtr& y,
                                   int n_max, double delta, const MetricOptions& opts = {}) {
    if (n_max < 1) throw std::invalid_argument("metric_general: N must be >= 1");
    const double d_max = std::max(x->max_tile_diameter(), y->max_tile_diameter());
    auto wx = x->window(static_cast<double>(n_max));
    auto wy = y->window(static_cast<double>(n_max));
    const SegmentSet skel_x = skeleton(*wx);
    const SegmentSet skel_y = skeleton(*wy);

    std::vector<double> per_n(static_cast<std::size_t>(n_max), 0.0);
    parallel_for(per_n.size(), opts.threads, [&](std::size_t idx) {
        const double n = static_cast<double>(idx + 1);
        const SegmentSet a = clip_to_disk(skel_x, n);
        const SegmentSet b = clip_to_disk(skel_y, n);
        double h = 0.0;
        if (a.empty() && b.empty())
            h = 0.0;
        else if (a.empty() || b.empty())
            h = 2.0 * n;
        else
            h = hausdorff_distance(a, b, delta).value;
        per_n[idx] = std::max(0.0, h - delta) / n;
    });

    MetricResult out;
    for (double v : per_n) out.lower = std::max(out.lower, v);
    out.upper = std::max(out.lower + 2.0 * delta, 4.0 * d_max / static_cast<double>(n_max));
    out.truncation_radius = static_cast<double>(n_max);
    out.notes = "general metric, N=" + std::to_string(n_max) + ", delta=" + std::to_string(delta) +
                ", tail 4*Dmax/N";
    return out;
}

namespace detail {

// One direction of the d1 decision at level r: does a translation v with
// |v| < r carry the minimal patch of x over B_{1/r + r} into y? The inflation
// by r makes the support condition on the moved patch automatic.
inline bool d1_direction(const TilingWindow& wx, const TilingWindow& wy, double r, double tol) {
    const double region = 1.0 / r + r;
    const std::vector<std::size_t> xs = wx.tiles_meeting_disk({0, 0}, region);
    if (xs.empty()) return false;

    std::size_t probe = xs[0];
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i : xs) {
        const double d = norm(wx.tile_centroid(i));
        if (d < best) {
            best = d;
            probe = i;
        }
    }
    const Polygon& probe_poly = wx.tile_polygon(probe);
    const Vec2 pc = wx.tile_centroid(probe);

    bool found = false;
    wy.for_each_tile_near(pc, r + tol, [&](std::size_t j) {
        if (found) return;
        const Vec2 v = wy.tile_centroid(j) - pc;
        if (!(norm(v) < r)) return;
        if (!polygon_equal(apply_isometry(Isometry2::translate(v), probe_poly),
                           wy.tile_polygon(j), tol))
            return;
        for (std::size_t i : xs) {
            const Polygon img = apply_isometry(Isometry2::translate(v), wx.tile_polygon(i));
            if (!wy.find_matching_tile(img, tol)) return;
        }
        found = true;
    });
    return found;
}

// d2 direction: a single direct isometry T in B_r(E^d). Candidates come from
// aligning the central probe tile with congruent y-tiles nearby.
inline bool d2_direction(const TilingWindow& wx, const TilingWindow& wy, double r, double tol) {
    const double region = 1.0 / r + r;
    const std::vector<std::size_t> xs = wx.tiles_meeting_disk({0, 0}, region);
    if (xs.empty()) return false;

    std::size_t probe = xs[0];
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i : xs) {
        const double d = norm(wx.tile_centroid(i));
        if (d < best) {
            best = d;
            probe = i;
        }
    }
    const Polygon& probe_poly = wx.tile_polygon(probe);
    const Vec2 pc = wx.tile_centroid(probe);

    bool found = false;
    wy.for_each_tile_near(pc, r * (norm(pc) + 1.0) + tol, [&](std::size_t j) {
        if (found) return;
        for (const Isometry2& t : congruence_maps(probe_poly, wy.tile_polygon(j), tol)) {
            if (!in_epsilon_ball(t, r)) continue;
            bool all = true;
            for (std::size_t i : xs) {
                const Polygon img = apply_isometry(t, wx.tile_polygon(i));
                if (!wy.find_matching_tile(img, tol)) {
                    all = false;
                    break;
                }
            }
            if (all) {
                found = true;
                return;
            }
        }
    });
    return found;
}

// d3 direction: per-tile isometries, greedy nearest match per congruence
// class, then the matched y-tiles must form a connected patch whose support
// still covers B_{1/r}.
inline bool d3_direction(const TilingWindow& wx, const TilingWindow& wy, double r, double tol,
                         double tau_area_rel) {
    const double region = 1.0 / r + r;
    const std::vector<std::size_t> xs = wx.tiles_meeting_disk({0, 0}, region);
    if (xs.empty()) return false;

    std::vector<char> used(wy.tiles().size(), 0);
    std::vector<std::size_t> matched;
    matched.reserve(xs.size());
    for (std::size_t i : xs) {
        const Polygon& poly = wx.tile_polygon(i);
        const Vec2 c = wx.tile_centroid(i);
        const double reach = r * (norm(c) + 1.0) + tol;
        std::size_t pick = static_cast<std::size_t>(-1);
        double pick_d = std::numeric_limits<double>::infinity();
        wy.for_each_tile_near(c, reach, [&](std::size_t j) {
            if (used[j]) return;
            for (const Isometry2& t : congruence_maps(poly, wy.tile_polygon(j), tol)) {
                const double d = isometry_distance(t, Isometry2::identity());
                if (d < r && (d < pick_d || (d == pick_d && j < pick))) {
                    pick_d = d;
                    pick = j;
                }
            }
        });
        if (pick == static_cast<std::size_t>(-1)) return false;
        used[pick] = 1;
        matched.push_back(pick);
    }

    const double k_rad = 1.0 / r;
    const double disk = kPi * k_rad * k_rad;
    double covered = 0.0;
    for (std::size_t j : matched)
        covered += polygon_disk_intersection_area(wy.tile_polygon(j), {0, 0}, k_rad);
    if (disk - covered > tau_area_rel * disk) return false;

    Patch yp;
    yp.table = wy.prototile_table();
    for (std::size_t j : matched) yp.tiles.push_back(wy.tiles()[j]);
    return patch_connected(yp, std::max(tol, 1e-9));
}

template <class Decide>
MetricResult bisect_adapted(double r_min, const MetricOptions& opts, Decide&& decide,
                            double window_radius, const char* name) {
    if (!(r_min > 0.0) || !(r_min < kMetricCap))
        throw std::invalid_argument("adapted metric: r_min must be in (0, 1/sqrt(2))");
    MetricResult out;
    out.truncation_radius = window_radius;
    out.notes = std::string(name) + " bisection step " + std::to_string(opts.grid_step);
    if (decide(r_min)) {
        out.lower = 0.0;
        out.upper = r_min;
        return out;
    }
    double lo = r_min;
    double hi = kMetricCap;  // definition fallback level
    while (hi - lo > opts.grid_step) {
        const double mid = 0.5 * (lo + hi);
        if (decide(mid))
            hi = mid;
        else
            lo = mid;
    }
    out.lower = lo;
    out.upper = hi;
    return out;
}

}  // namespace detail

inline MetricResult metric_d1(const WindowProviderPtr& x, const WindowProviderPtr& y,
                              double r_min, const MetricOptions& opts = {}) {
    const double d_max = std::max(x->max_tile_diameter(), y->max_tile_diameter());
    const double rx = 1.0 / r_min + 2.0;
    const double ry = 1.0 / r_min + d_max + 4.0;
    auto wxy = x->window(ry);
    auto wyy = y->window(ry);
    auto wx = x->window(rx);
    auto wy = y->window(rx);
    auto decide = [&](double r) {
        return detail::d1_direction(*wx, *wyy, r, opts.tol_geom) ||
               detail::d1_direction(*wy, *wxy, r, opts.tol_geom);
    };
    return detail::bisect_adapted(r_min, opts, decide, rx, "d1");
}

inline MetricResult metric_d2(const WindowProviderPtr& x, const WindowProviderPtr& y,
                              double r_min, const MetricOptions& opts = {}) {
    const double d_max = std::max(x->max_tile_diameter(), y->max_tile_diameter());
    const double rx = 1.0 / r_min + 2.0;
    const double ry = 1.0 / r_min + d_max + 4.0;
    auto wxy = x->window(ry);
    auto wyy = y->window(ry);
    auto wx = x->window(rx);
    auto wy = y->window(rx);
    auto decide = [&](double r) {
        return detail::d2_direction(*wx, *wyy, r, opts.tol_geom) ||
               detail::d2_direction(*wy, *wxy, r, opts.tol_geom);
    };
    return detail::bisect_adapted(r_min, opts, decide, rx, "d2");
}

inline MetricResult metric_d3(const WindowProviderPtr& x, const WindowProviderPtr& y,
                              double r_min, const MetricOptions& opts = {},
                              double tau_area_rel = 1e-6) {
    const double d_max = std::max(x->max_tile_diameter(), y->max_tile_diameter());
    const double rx = 1.0 / r_min + 2.0;
    const double ry = 1.0 / r_min + d_max + 4.0;
    auto wxy = x->window(ry);
    auto wyy = y->window(ry);
    auto wx = x->window(rx);
    auto wy = y->window(rx);
    auto decide = [&](double r) {
        return detail::d3_direction(*wx, *wyy, r, opts.tol_geom, tau_area_rel) ||
               detail::d3_direction(*wy, *wxy, r, opts.tol_geom, tau_area_rel);
    };
    return detail::bisect_adapted(r_min, opts, decide, rx, "d3");
}

}  // namespace tilerec
