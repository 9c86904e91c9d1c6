#pragma once

// T^(2) census (two-tile protopatches) and evidence-based finite local
// complexity classification. Finite windows cannot prove FLC, so verdicts are
// explicitly about stabilization of class counts across growing radii.

#include <map>
#include <string>
#include <vector>

#include "tilerec/generators.hpp"
#include "tilerec/tiling.hpp"

namespace tilerec {

struct T2Census {
    PatchMode mode = PatchMode::translation;
    double window_radius = 0.0;
    struct Entry {
        CanonicalProtopatch proto;
        std::size_t count = 0;
    };
    std::vector<Entry> classes;  // sorted by hash

    std::size_t class_count() const { return classes.size(); }
};

// Tally every unordered pair of adjacent tiles wholly inside B_radius.
// Adjacency means boundary distance <= tol_geom; corner contact counts.
inline T2Census enumerate_T2(const TilingWindow& w, PatchMode mode, double q = 1e-6,
                             double tol_geom = 1e-9) {
    T2Census out;
    out.mode = mode;
    out.window_radius = w.radius();

    const double r = w.radius();
    std::vector<char> inside(w.tiles().size(), 0);
    for (std::size_t i = 0; i < w.tiles().size(); ++i) {
        bool all_in = true;
        for (Vec2 v : w.tile_polygon(i))
            if (norm(v) > r + tol_geom) {
                all_in = false;
                break;
            }
        inside[i] = all_in;
    }

    std::map<std::uint64_t, T2Census::Entry> tally;
    const double reach = 2.0 * w.max_tile_diameter() + 1.0;
    for (std::size_t i = 0; i < w.tiles().size(); ++i) {
        if (!inside[i]) continue;
        w.for_each_tile_near(w.tile_centroid(i), reach, [&](std::size_t j) {
            if (j <= i || !inside[j]) return;
            if (polygon_boundary_distance(w.tile_polygon(i), w.tile_polygon(j)) > tol_geom)
                return;
            Patch pair;
            pair.table = w.prototile_table();
            pair.tiles = {w.tiles()[i], w.tiles()[j]};
            CanonicalProtopatch canon = canonicalize(pair, mode, q);
            auto it = tally.find(canon.hash);
            if (it == tally.end())
                tally.emplace(canon.hash, T2Census::Entry{std::move(canon), 1});
            else
                ++it->second.count;
        });
    }
    out.classes.reserve(tally.size());
    for (auto& [h, entry] : tally) out.classes.push_back(std::move(entry));
    return out;
}

enum class FLCVerdict { flc_translation, flc_euclidean, non_flc_evidence, inconclusive };

inline const char* to_string(FLCVerdict v) {
    switch (v) {
        case FLCVerdict::flc_translation: return "FLC-translation";
        case FLCVerdict::flc_euclidean: return "FLC-Euclidean";
        case FLCVerdict::non_flc_evidence: return "non-FLC-evidence";
        default: return "inconclusive";
    }
}

struct FLCReport {
    FLCVerdict verdict = FLCVerdict::inconclusive;
    std::vector<T2Census> translation_censuses;
    std::vector<T2Census> isometry_censuses;
};

// Stabilization across the last two radii is the evidence rule: translation
// counts equal -> FLC-translation; otherwise isometry counts equal ->
// FLC-Euclidean; otherwise isometry counts growing at every step ->
// non-FLC-evidence.
inline FLCReport classify_flc(const WindowProviderPtr& p, const std::vector<double>& radii,
                              double q = 1e-6, double tol_geom = 1e-9) {
    if (radii.size() < 3) throw std::invalid_argument("classify_flc: need at least 3 radii");
    for (std::size_t i = 1; i < radii.size(); ++i)
        if (!(radii[i] > radii[i - 1]))
            throw std::invalid_argument("classify_flc: radii must increase");

    FLCReport out;
    for (double r : radii) {
        auto w = p->window(r);
        out.translation_censuses.push_back(enumerate_T2(*w, PatchMode::translation, q, tol_geom));
        out.isometry_censuses.push_back(enumerate_T2(*w, PatchMode::isometry, q, tol_geom));
    }

    const std::size_t last = radii.size() - 1;
    const auto tcount = [&](std::size_t i) { return out.translation_censuses[i].class_count(); };
    const auto icount = [&](std::size_t i) { return out.isometry_censuses[i].class_count(); };

    if (tcount(last) == tcount(last - 1)) {
        out.verdict = FLCVerdict::flc_translation;
    } else if (icount(last) == icount(last - 1)) {
        out.verdict = FLCVerdict::flc_euclidean;
    } else {
        bool growing = true;
        for (std::size_t i = 1; i <= last; ++i)
            if (icount(i) <= icount(i - 1)) growing = false;
        out.verdict = growing ? FLCVerdict::non_flc_evidence : FLCVerdict::inconclusive;
    }
    return out;
}

}  // namespace tilerec
