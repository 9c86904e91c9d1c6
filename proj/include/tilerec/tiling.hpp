#pragma once

// Tiles, tiling windows, patches, skeletons and protopatch canonicalization.
// A TilingWindow is the finite stand-in for an infinite tiling: every tile
// meeting a closed origin-centered disk, plus the prototile table.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "tilerec/geometry.hpp"

namespace tilerec {

struct Prototile {
    std::string id;
    Polygon polygon;  // simple, CCW, positive area, closure of its interior
};

struct PlacedTile {
    int proto = 0;  // index into the window's prototile table
    Isometry2 placement;
};

class PrototileTable {
  public:
    PrototileTable() = default;
    explicit PrototileTable(std::vector<Prototile> items) : items_(std::move(items)) {
        finalize();
    }

    const std::vector<Prototile>& items() const { return items_; }
    const Prototile& operator[](std::size_t i) const { return items_[i]; }
    std::size_t size() const { return items_.size(); }

    std::optional<int> index_of(const std::string& id) const {
        for (std::size_t i = 0; i < items_.size(); ++i)
            if (items_[i].id == id) return static_cast<int>(i);
        return std::nullopt;
    }

    double max_diameter() const { return max_diameter_; }
    double max_circumradius() const { return max_circumradius_; }

    // Congruence class (direct isometries) of each prototile.
    int congruence_class(int i) const { return classes_[i]; }

    // Direct isometries g with g(items[i].polygon) == items[j].polygon.
    const std::vector<Isometry2>& maps(int i, int j) const {
        return maps_[static_cast<std::size_t>(i) * items_.size() + j];
    }

  private:
    void finalize() {
        const std::size_t n = items_.size();
        classes_.assign(n, -1);
        maps_.assign(n * n, {});
        int next = 0;
        for (std::size_t i = 0; i < n; ++i) {
            max_diameter_ = std::max(max_diameter_, polygon_diameter(items_[i].polygon));
            max_circumradius_ = std::max(
                max_circumradius_,
                polygon_circumradius(items_[i].polygon, polygon_centroid(items_[i].polygon)));
            for (std::size_t j = 0; j < n; ++j) {
                maps_[i * n + j] = congruence_maps(items_[i].polygon, items_[j].polygon, 1e-7);
            }
            if (classes_[i] < 0) {
                classes_[i] = next++;
                for (std::size_t j = i + 1; j < n; ++j)
                    if (!maps_[i * n + j].empty()) classes_[j] = classes_[i];
            }
        }
    }

    std::vector<Prototile> items_;
    std::vector<int> classes_;
    std::vector<std::vector<Isometry2>> maps_;
    double max_diameter_ = 0.0;
    double max_circumradius_ = 0.0;
};

using PrototileTablePtr = std::shared_ptr<const PrototileTable>;

inline Polygon placed_polygon(const PrototileTable& table, const PlacedTile& tile) {
    return apply_isometry(tile.placement, table[tile.proto].polygon);
}

// Connected finite set of placed tiles (connectivity via boundary contact).
struct Patch {
    PrototileTablePtr table;
    std::vector<PlacedTile> tiles;

    Polygon tile_polygon(std::size_t i) const { return placed_polygon(*table, tiles[i]); }
    std::size_t size() const { return tiles.size(); }
    bool empty() const { return tiles.empty(); }
};

namespace detail {

// Centroid-bucketed dense grid over a fixed list of polygons. Buckets are a
// flat CSR-style layout over the bounding box of the centroids.
class PolygonGrid {
  public:
    PolygonGrid() = default;
    PolygonGrid(std::vector<Vec2> centroids, double cell)
        : centroids_(std::move(centroids)), cell_(std::max(cell, 1e-6)) {
        if (centroids_.empty()) {
            nx_ = ny_ = 1;
            starts_.assign(2, 0);
            return;
        }
        double x0 = centroids_[0].x, y0 = centroids_[0].y;
        double x1 = x0, y1 = y0;
        for (Vec2 c : centroids_) {
            x0 = std::min(x0, c.x);
            x1 = std::max(x1, c.x);
            y0 = std::min(y0, c.y);
            y1 = std::max(y1, c.y);
        }
        gx0_ = static_cast<long>(std::floor(x0 / cell_));
        gy0_ = static_cast<long>(std::floor(y0 / cell_));
        nx_ = static_cast<long>(std::floor(x1 / cell_)) - gx0_ + 1;
        ny_ = static_cast<long>(std::floor(y1 / cell_)) - gy0_ + 1;
        std::vector<std::size_t> counts(static_cast<std::size_t>(nx_ * ny_), 0);
        std::vector<std::size_t> cells(centroids_.size());
        for (std::size_t i = 0; i < centroids_.size(); ++i) {
            cells[i] = cell_index(centroids_[i]);
            ++counts[cells[i]];
        }
        starts_.assign(counts.size() + 1, 0);
        for (std::size_t c = 0; c < counts.size(); ++c) starts_[c + 1] = starts_[c] + counts[c];
        items_.resize(centroids_.size());
        std::vector<std::size_t> cursor(starts_.begin(), starts_.end() - 1);
        for (std::size_t i = 0; i < centroids_.size(); ++i) items_[cursor[cells[i]]++] = i;
    }

    template <class Fn>
    void for_each_near(Vec2 p, double range, Fn&& fn) const {
        if (items_.empty()) return;
        const long cx0 = std::max(gx0_, static_cast<long>(std::floor((p.x - range) / cell_)));
        const long cx1 = std::min(gx0_ + nx_ - 1,
                                  static_cast<long>(std::floor((p.x + range) / cell_)));
        const long cy0 = std::max(gy0_, static_cast<long>(std::floor((p.y - range) / cell_)));
        const long cy1 = std::min(gy0_ + ny_ - 1,
                                  static_cast<long>(std::floor((p.y + range) / cell_)));
        for (long gx = cx0; gx <= cx1; ++gx) {
            for (long gy = cy0; gy <= cy1; ++gy) {
                const std::size_t cidx =
                    static_cast<std::size_t>((gx - gx0_) * ny_ + (gy - gy0_));
                for (std::size_t k = starts_[cidx]; k < starts_[cidx + 1]; ++k) {
                    const std::size_t i = items_[k];
                    if (dist(centroids_[i], p) <= range) fn(i);
                }
            }
        }
    }

  private:
    std::size_t cell_index(Vec2 p) const {
        const long gx = static_cast<long>(std::floor(p.x / cell_)) - gx0_;
        const long gy = static_cast<long>(std::floor(p.y / cell_)) - gy0_;
        return static_cast<std::size_t>(gx * ny_ + gy);
    }

    std::vector<Vec2> centroids_;
    double cell_ = 1.0;
    long gx0_ = 0, gy0_ = 0, nx_ = 0, ny_ = 0;
    std::vector<std::size_t> starts_;
    std::vector<std::size_t> items_;
};

}  // namespace detail

// All tiles of one tiling meeting the closed disk B_radius, with fast
// geometric lookups. Immutable after construction.
class TilingWindow {
  public:
    TilingWindow() = default;
    TilingWindow(double radius, PrototileTablePtr table, std::vector<PlacedTile> tiles)
        : radius_(radius), table_(std::move(table)), tiles_(std::move(tiles)) {
        polygons_.reserve(tiles_.size());
        centroids_.reserve(tiles_.size());
        for (const PlacedTile& t : tiles_) {
            polygons_.push_back(placed_polygon(*table_, t));
            centroids_.push_back(polygon_centroid(polygons_.back()));
        }
        const double cell = std::max(1.0, table_->max_diameter());
        grid_ = detail::PolygonGrid(centroids_, cell);
    }

    double radius() const { return radius_; }
    const std::vector<PlacedTile>& tiles() const { return tiles_; }
    const PrototileTable& prototiles() const { return *table_; }
    PrototileTablePtr prototile_table() const { return table_; }
    const Polygon& tile_polygon(std::size_t i) const { return polygons_[i]; }
    Vec2 tile_centroid(std::size_t i) const { return centroids_[i]; }
    double max_tile_diameter() const { return table_->max_diameter(); }

    template <class Fn>
    void for_each_tile_near(Vec2 p, double range, Fn&& fn) const {
        grid_.for_each_near(p, range, std::forward<Fn>(fn));
    }

    // Tiles with nonempty intersection with the closed disk.
    std::vector<std::size_t> tiles_meeting_disk(Vec2 center, double r) const {
        std::vector<std::size_t> out;
        const double reach = r + table_->max_circumradius() + 1e-9;
        for_each_tile_near(center, reach, [&](std::size_t i) {
            if (point_polygon_distance(center, polygons_[i]) <= r) out.push_back(i);
        });
        std::sort(out.begin(), out.end());
        return out;
    }

    // Some tile whose placed polygon equals `poly` as a point set within tol.
    std::optional<std::size_t> find_matching_tile(const Polygon& poly, double tol) const {
        const Vec2 c = polygon_centroid(poly);
        std::optional<std::size_t> hit;
        for_each_tile_near(c, std::max(tol * 4.0, 1e-6) + 1e-3, [&](std::size_t i) {
            if (!hit && dist(centroids_[i], c) <= std::max(tol * 2.0, 1e-7) &&
                polygon_equal(polygons_[i], poly, tol))
                hit = i;
        });
        return hit;
    }

    // Deterministic containing tile for a point. Interior hits are unique
    // (tiles pack); boundary points fall back to lowest boundary distance
    // with lowest index on ties.
    std::optional<std::size_t> locate(Vec2 p) const {
        const double reach = table_->max_circumradius() + 1e-6;
        std::optional<std::size_t> interior;
        for_each_tile_near(p, reach, [&](std::size_t i) {
            if (!interior && point_in_polygon(p, polygons_[i])) interior = i;
        });
        if (interior) return interior;
        std::optional<std::size_t> best;
        double best_d = std::numeric_limits<double>::infinity();
        for_each_tile_near(p, reach, [&](std::size_t i) {
            const double d = point_polygon_distance(p, polygons_[i]);
            if (d < best_d || (d == best_d && best && i < *best)) {
                best_d = d;
                best = i;
            }
        });
        if (best && best_d <= 1e-7) return best;
        return std::nullopt;
    }

  private:
    double radius_ = 0.0;
    PrototileTablePtr table_;
    std::vector<PlacedTile> tiles_;
    std::vector<Polygon> polygons_;
    std::vector<Vec2> centroids_;
    detail::PolygonGrid grid_;
};

// ∂x within the window: every boundary edge of every tile. Shared edges
// appear twice; Hausdorff distance does not care.
inline SegmentSet skeleton(const TilingWindow& w) {
    SegmentSet out;
    out.reserve(w.tiles().size() * 4);
    for (std::size_t i = 0; i < w.tiles().size(); ++i) {
        const Polygon& poly = w.tile_polygon(i);
        for (std::size_t j = 0; j < poly.size(); ++j)
            out.push_back({poly[j], poly[(j + 1) % poly.size()]});
    }
    return out;
}

// Minimal element of x[[K]] for K the disk of the given radius and center:
// exactly the tiles meeting K.
inline Patch patches_covering(const TilingWindow& w, double k_radius, Vec2 center,
                              double tol_geom = 1e-9) {
    if (norm(center) + k_radius > w.radius() + tol_geom)
        throw insufficient_window("patches_covering: disk not inside certified window");
    Patch p;
    p.table = w.prototile_table();
    for (std::size_t i : w.tiles_meeting_disk(center, k_radius)) p.tiles.push_back(w.tiles()[i]);
    return p;
}

// Disk ⊆ union of tile supports, decided by area at relative tolerance.
// Assumes the tiles pack (they come from one tiling).
inline bool patch_support_contains_disk(const Patch& p, double radius, Vec2 center,
                                        double tau_area_rel = 1e-6) {
    const double disk = kPi * radius * radius;
    double covered = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        covered += polygon_disk_intersection_area(p.tile_polygon(i), center, radius);
    return disk - covered <= tau_area_rel * disk;
}

// Adjacency = boundary distance <= tol (corner contact counts).
inline bool patch_connected(const Patch& p, double tol_geom = 1e-9) {
    const std::size_t n = p.size();
    if (n <= 1) return n == 1;
    std::vector<Polygon> polys(n);
    std::vector<Vec2> cents(n);
    double maxrad = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        polys[i] = p.tile_polygon(i);
        cents[i] = polygon_centroid(polys[i]);
        maxrad = std::max(maxrad, polygon_circumradius(polys[i], cents[i]));
    }
    detail::PolygonGrid grid(cents, std::max(1.0, 2.0 * maxrad));
    std::vector<char> seen(n, 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
        const std::size_t i = stack.back();
        stack.pop_back();
        grid.for_each_near(cents[i], 2.0 * maxrad + tol_geom + 1e-9, [&](std::size_t j) {
            if (seen[j] || j == i) return;
            if (polygon_boundary_distance(polys[i], polys[j]) <= tol_geom) {
                seen[j] = 1;
                ++reached;
                stack.push_back(j);
            }
        });
    }
    return reached == n;
}

struct WindowCheck {
    bool covers = false;
    bool packs = false;
    bool all_meet = false;
    double deficit = 0.0;      // |B_R| - sum of tile∩B_R areas
    double max_overlap = 0.0;  // worst pairwise interior overlap
    bool ok() const { return covers && packs && all_meet; }
};

inline WindowCheck validate_window(const TilingWindow& w, double tau_area_rel = 1e-6) {
    WindowCheck out;
    const double r = w.radius();
    const double disk = kPi * r * r;
    double covered = 0.0;
    out.all_meet = true;
    for (std::size_t i = 0; i < w.tiles().size(); ++i) {
        covered += polygon_disk_intersection_area(w.tile_polygon(i), {0, 0}, r);
        if (point_polygon_distance({0, 0}, w.tile_polygon(i)) > r + 1e-9) out.all_meet = false;
    }
    out.deficit = disk - covered;
    out.covers = out.deficit <= tau_area_rel * disk;

    const double reach = 2.0 * w.max_tile_diameter();
    for (std::size_t i = 0; i < w.tiles().size(); ++i) {
        w.for_each_tile_near(w.tile_centroid(i), reach, [&](std::size_t j) {
            if (j <= i) return;
            out.max_overlap =
                std::max(out.max_overlap, polygon_overlap_area(w.tile_polygon(i), w.tile_polygon(j)));
        });
    }
    out.packs = out.max_overlap <= tau_area_rel * disk;
    return out;
}

// ---- canonicalization ----

enum class PatchMode { translation, isometry };

struct CanonicalProtopatch {
    PatchMode mode = PatchMode::translation;
    Patch representative;  // canonical pose
    Isometry2 pose;        // representative = apply(pose, input patch)
    std::uint64_t hash = 0;
    double quantum = 1e-6;
};

namespace detail {

inline std::int64_t quantize(double v, double q) {
    return static_cast<std::int64_t>(std::llround(v / q));
}

// Quantized placed polygon, cyclically rotated to start at its lex-least
// quantized vertex. Equal point sets give equal records.
inline std::vector<std::int64_t> polygon_record(const Polygon& poly, double q) {
    const std::size_t n = poly.size();
    std::vector<std::pair<std::int64_t, std::int64_t>> pts(n);
    for (std::size_t i = 0; i < n; ++i) pts[i] = {quantize(poly[i].x, q), quantize(poly[i].y, q)};
    std::size_t start = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (pts[i] < pts[start]) start = i;
    std::vector<std::int64_t> rec;
    rec.reserve(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        rec.push_back(pts[(start + i) % n].first);
        rec.push_back(pts[(start + i) % n].second);
    }
    return rec;
}

inline std::uint64_t fnv1a(const std::vector<std::vector<std::int64_t>>& records) {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&](std::uint64_t v) {
        for (int k = 0; k < 8; ++k) {
            h ^= (v >> (8 * k)) & 0xff;
            h *= 1099511628211ull;
        }
    };
    for (const auto& rec : records) {
        mix(0x9e3779b97f4a7c15ull);
        for (std::int64_t v : rec) mix(static_cast<std::uint64_t>(v));
    }
    return h;
}

// Lex-least quantized vertex over the whole patch, returned unquantized.
inline Vec2 least_vertex(const Patch& p, double q) {
    bool first = true;
    std::pair<std::int64_t, std::int64_t> best_q{};
    Vec2 best{};
    for (std::size_t i = 0; i < p.size(); ++i) {
        for (Vec2 v : p.tile_polygon(i)) {
            const std::pair<std::int64_t, std::int64_t> qv{quantize(v.x, q), quantize(v.y, q)};
            if (first || qv < best_q || (qv == best_q && lex_less(v, best))) {
                first = false;
                best_q = qv;
                best = v;
            }
        }
    }
    return best;
}

struct CanonicalForm {
    Patch patch;
    Isometry2 pose;
    std::vector<std::vector<std::int64_t>> records;
};

inline CanonicalForm translation_canonical(const Patch& p, double q) {
    const Isometry2 shift = Isometry2::translate(-least_vertex(p, q));
    CanonicalForm out;
    out.pose = shift;
    out.patch.table = p.table;
    std::vector<std::pair<std::vector<std::int64_t>, PlacedTile>> keyed;
    keyed.reserve(p.size());
    for (const PlacedTile& t : p.tiles) {
        PlacedTile moved{t.proto, shift.compose(t.placement)};
        keyed.emplace_back(polygon_record(placed_polygon(*p.table, moved), q), moved);
    }
    std::sort(keyed.begin(), keyed.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [rec, tile] : keyed) {
        out.records.push_back(std::move(rec));
        out.patch.tiles.push_back(tile);
    }
    return out;
}

}  // namespace detail

// Translation mode: shift the lex-least quantized vertex to the origin, sort
// tile records, hash. Isometry mode: first rotate about the patch centroid so
// the longest edge of the tile nearest the centroid lies along +x; ties are
// resolved by taking the lexicographically least resulting record list.
inline CanonicalProtopatch canonicalize(const Patch& p, PatchMode mode, double q = 1e-6) {
    if (p.empty()) throw empty_input("canonicalize: empty patch");
    CanonicalProtopatch out;
    out.mode = mode;
    out.quantum = q;

    if (mode == PatchMode::translation) {
        auto form = detail::translation_canonical(p, q);
        out.representative = std::move(form.patch);
        out.pose = form.pose;
        out.hash = detail::fnv1a(form.records);
        return out;
    }

    // Area-weighted centroid of the support (isometry equivariant).
    Vec2 center{0, 0};
    double total = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const Polygon poly = p.tile_polygon(i);
        const double a = polygon_area(poly);
        center = center + a * polygon_centroid(poly);
        total += a;
    }
    center = (1.0 / total) * center;

    double best_d = std::numeric_limits<double>::infinity();
    std::vector<Polygon> polys(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        polys[i] = p.tile_polygon(i);
        best_d = std::min(best_d, dist(polygon_centroid(polys[i]), center));
    }

    // All tiles tying for nearest and all their near-longest edges are
    // candidate alignments; the lex-least record list wins. Ties must be
    // explored or congruent patches with permuted tiles would split.
    std::optional<detail::CanonicalForm> best;
    for (std::size_t a = 0; a < p.size(); ++a) {
        if (dist(polygon_centroid(polys[a]), center) > best_d + q) continue;
        const Polygon& ap = polys[a];
        double longest = 0.0;
        for (std::size_t i = 0; i < ap.size(); ++i)
            longest = std::max(longest, dist(ap[i], ap[(i + 1) % ap.size()]));
        for (std::size_t i = 0; i < ap.size(); ++i) {
            const Vec2 e = ap[(i + 1) % ap.size()] - ap[i];
            if (norm(e) < longest - q) continue;
            for (double sign : {1.0, -1.0}) {
                const double theta = -std::atan2(sign * e.y, sign * e.x);
                Patch rotated;
                rotated.table = p.table;
                const Isometry2 rot = Isometry2::rotate_about(theta, center);
                for (const PlacedTile& t : p.tiles)
                    rotated.tiles.push_back({t.proto, rot.compose(t.placement)});
                auto form = detail::translation_canonical(rotated, q);
                form.pose = form.pose.compose(rot);
                if (!best || form.records < best->records) best = std::move(form);
            }
        }
    }
    out.representative = std::move(best->patch);
    out.pose = best->pose;
    out.hash = detail::fnv1a(best->records);
    return out;
}

// T with apply(T, p) == q as tile sets (pure translation in translation
// mode), or nothing. Candidates come from aligning a fixed anchor tile of p
// with every tile of q.
inline std::optional<Isometry2> patch_match(const Patch& p, const Patch& q, PatchMode mode,
                                            double tol) {
    if (p.empty() || q.empty() || p.size() != q.size()) return std::nullopt;

    std::vector<Polygon> q_polys(q.size());
    std::vector<Vec2> q_cents(q.size());
    double maxrad = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        q_polys[i] = q.tile_polygon(i);
        q_cents[i] = polygon_centroid(q_polys[i]);
        maxrad = std::max(maxrad, polygon_circumradius(q_polys[i], q_cents[i]));
    }
    detail::PolygonGrid grid(q_cents, std::max(1.0, 2.0 * maxrad));

    const auto matches_all = [&](const Isometry2& t) {
        for (std::size_t i = 0; i < p.size(); ++i) {
            const Polygon img = apply_isometry(t, p.tile_polygon(i));
            const Vec2 c = polygon_centroid(img);
            bool found = false;
            grid.for_each_near(c, std::max(tol * 2.0, 1e-7), [&](std::size_t j) {
                if (!found && polygon_equal(q_polys[j], img, tol)) found = true;
            });
            if (!found) return false;
        }
        return true;
    };

    const Polygon a_poly = p.tile_polygon(0);
    const Vec2 a_cent = polygon_centroid(a_poly);
    for (std::size_t j = 0; j < q.size(); ++j) {
        if (mode == PatchMode::translation) {
            const Isometry2 t = Isometry2::translate(q_cents[j] - a_cent);
            if (polygon_equal(apply_isometry(t, a_poly), q_polys[j], tol) && matches_all(t))
                return t;
        } else {
            for (const Isometry2& g : congruence_maps(a_poly, q_polys[j], std::max(tol, 1e-9)))
                if (matches_all(g)) return g;
        }
    }
    return std::nullopt;
}

}  // namespace tilerec
