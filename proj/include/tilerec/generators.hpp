#pragma once

// WindowProviders for the four tiling families: periodic lattice, shear rows
// of unit squares, Penrose rhombs (Robinson-triangle deflation) and the
// Conway-Radin pinwheel. Substitution rules are the standard external
// constructions; windows are built once at capacity and every requested
// radius is an exact restriction of that build.

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "tilerec/tiling.hpp"

namespace tilerec {

class WindowProvider;
using WindowProviderPtr = std::shared_ptr<WindowProvider>;

// Deterministic oracle producing consistent nested windows of one tiling.
// window(R') restricted to tiles meeting B_R equals window(R): for the
// closed-form generators this holds for any request order; substitution
// masters are grown only while no window has been handed out, so observable
// windows always come from a single build.
class WindowProvider {
  public:
    struct Core {
        std::string description;
        bool exact_restriction = true;        // master may grow at any time
        std::optional<double> fixed_radius;   // file-backed windows
        std::function<std::pair<PrototileTablePtr, std::vector<PlacedTile>>(double)> build;
    };

    explicit WindowProvider(Core core, double initial_radius = 0.0)
        : core_(std::move(core)), initial_radius_(initial_radius) {}

    const std::string& describe() const { return core_.description; }
    std::optional<double> fixed_radius() const { return core_.fixed_radius; }

    std::shared_ptr<const TilingWindow> window(double radius) const {
        std::scoped_lock lock(mu_);
        if (core_.fixed_radius && radius > *core_.fixed_radius + 1e-9)
            throw insufficient_window(core_.description + ": window radius " +
                                      std::to_string(radius) + " exceeds available " +
                                      std::to_string(*core_.fixed_radius));
        auto it = cache_.find(radius);
        if (it != cache_.end()) return it->second;
        ensure_master(radius);
        std::vector<PlacedTile> tiles;
        for (std::size_t i = 0; i < master_.size(); ++i)
            if (point_polygon_distance({0, 0}, master_polys_[i]) <= radius)
                tiles.push_back(master_[i]);
        auto w = std::make_shared<TilingWindow>(radius, table_, std::move(tiles));
        cache_.emplace(radius, w);
        return w;
    }

    double max_tile_diameter() const {
        std::scoped_lock lock(mu_);
        ensure_master(std::max(initial_radius_, 4.0));
        return table_->max_diameter();
    }

    PrototileTablePtr prototile_table() const {
        std::scoped_lock lock(mu_);
        ensure_master(std::max(initial_radius_, 4.0));
        return table_;
    }

  private:
    void ensure_master(double radius) const {
        const double want = std::max(radius, initial_radius_);
        if (table_ && master_radius_ >= want) return;
        if (table_ && !core_.exact_restriction && !cache_.empty())
            throw insufficient_window(core_.description +
                                      ": capacity exceeded after windows were issued; "
                                      "construct the provider with a larger radius");
        const double build_radius = core_.fixed_radius ? *core_.fixed_radius : want;
        auto [table, tiles] = core_.build(build_radius);
        table_ = std::move(table);
        master_ = std::move(tiles);
        master_polys_.clear();
        master_polys_.reserve(master_.size());
        for (const PlacedTile& t : master_) master_polys_.push_back(placed_polygon(*table_, t));
        master_radius_ = build_radius;
    }

    Core core_;
    double initial_radius_ = 0.0;
    mutable std::mutex mu_;
    mutable PrototileTablePtr table_;
    mutable std::vector<PlacedTile> master_;
    mutable std::vector<Polygon> master_polys_;
    mutable double master_radius_ = -1.0;
    mutable std::map<double, std::shared_ptr<const TilingWindow>> cache_;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline double unit_double(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

inline bool tile_sort_less(const std::pair<Vec2, std::size_t>& a,
                           const std::pair<Vec2, std::size_t>& b) {
    if (a.first.x != b.first.x) return a.first.x < b.first.x;
    if (a.first.y != b.first.y) return a.first.y < b.first.y;
    return a.second < b.second;
}

inline std::vector<PlacedTile> sort_tiles(const PrototileTable& table,
                                          std::vector<PlacedTile> tiles) {
    std::vector<std::pair<Vec2, std::size_t>> keys(tiles.size());
    for (std::size_t i = 0; i < tiles.size(); ++i)
        keys[i] = {polygon_centroid(placed_polygon(table, tiles[i])), i};
    std::sort(keys.begin(), keys.end(), tile_sort_less);
    std::vector<PlacedTile> out;
    out.reserve(tiles.size());
    for (const auto& [c, i] : keys) out.push_back(tiles[i]);
    return out;
}

}  // namespace detail

// Periodic tiling by the fundamental parallelogram of a basis.
inline WindowProviderPtr square_lattice(Vec2 e1 = {1, 0}, Vec2 e2 = {0, 1},
                                        double initial_radius = 0.0) {
    if (std::abs(cross(e1, e2)) < 1e-12)
        throw std::invalid_argument("square_lattice: degenerate basis");

    WindowProvider::Core core;
    core.description = "lattice";
    core.exact_restriction = true;
    core.build = [e1, e2](double radius) {
        Polygon cell{{0, 0}, e1, e1 + e2, e2};
        if (polygon_signed_area(cell) < 0.0) std::reverse(cell.begin(), cell.end());
        auto table = std::make_shared<PrototileTable>(
            std::vector<Prototile>{{"cell", cell}});
        const double circ = polygon_diameter(cell);
        // Index bounds via the inverse basis.
        const double det = cross(e1, e2);
        const double reach = radius + circ + 1.0;
        const long mi = static_cast<long>(std::ceil(
                            reach * (std::hypot(e2.y, e2.x) / std::abs(det)))) + 2;
        const long mj = static_cast<long>(std::ceil(
                            reach * (std::hypot(e1.y, e1.x) / std::abs(det)))) + 2;
        std::vector<PlacedTile> tiles;
        for (long i = -mi; i <= mi; ++i) {
            for (long j = -mj; j <= mj; ++j) {
                const Vec2 anchor = static_cast<double>(i) * e1 + static_cast<double>(j) * e2;
                Polygon poly = cell;
                for (Vec2& v : poly) v = v + anchor;
                if (point_polygon_distance({0, 0}, poly) <= radius + 2.0)
                    tiles.push_back({0, Isometry2::translate(anchor)});
            }
        }
        return std::make_pair(PrototileTablePtr(table), std::move(tiles));
    };
    return std::make_shared<WindowProvider>(std::move(core), initial_radius);
}

// Row k of unit squares shifted horizontally by offsets(k) in [0, 1).
inline WindowProviderPtr shear_squares(std::function<double(long)> offsets,
                                       std::string description = "shear",
                                       double initial_radius = 0.0) {
    WindowProvider::Core core;
    core.description = std::move(description);
    core.exact_restriction = true;
    core.build = [offsets = std::move(offsets)](double radius) {
        auto table = std::make_shared<PrototileTable>(std::vector<Prototile>{
            {"sq", Polygon{{0, 0}, {1, 0}, {1, 1}, {0, 1}}}});
        std::vector<PlacedTile> tiles;
        const double pad = radius + 2.0;
        const long k_lo = static_cast<long>(std::floor(-pad - 1.0));
        const long k_hi = static_cast<long>(std::ceil(pad));
        for (long k = k_lo; k <= k_hi; ++k) {
            const double off = offsets(k);
            const long m_lo = static_cast<long>(std::floor(-pad - off - 1.0));
            const long m_hi = static_cast<long>(std::ceil(pad - off));
            for (long m = m_lo; m <= m_hi; ++m) {
                const Vec2 anchor{off + static_cast<double>(m), static_cast<double>(k)};
                const double dx = std::max({anchor.x, 0.0, -(anchor.x + 1.0)});
                const double dy = std::max({anchor.y, 0.0, -(anchor.y + 1.0)});
                if (std::hypot(dx, dy) <= radius + 2.0)
                    tiles.push_back({0, Isometry2::translate(anchor)});
            }
        }
        return std::make_pair(PrototileTablePtr(table), std::move(tiles));
    };
    return std::make_shared<WindowProvider>(std::move(core), initial_radius);
}

// Quadratic Weyl offsets: the row-difference sequence frac((2k+1)phi)
// equidistributes, so vertical-pair configurations never repeat. (Linear
// frac(k*phi) has a constant row-to-row shift and collapses to a sheared
// lattice.)
inline WindowProviderPtr shear_golden(double initial_radius = 0.0) {
    const double phi = 0.5 * (1.0 + std::sqrt(5.0));
    return shear_squares(
        [phi](long k) {
            const double kk = static_cast<double>(k) * static_cast<double>(k);
            const double v = kk * phi;
            return v - std::floor(v);
        },
        "shear-golden", initial_radius);
}

inline WindowProviderPtr shear_zero(double initial_radius = 0.0) {
    return shear_squares([](long) { return 0.0; }, "shear-zero", initial_radius);
}

inline WindowProviderPtr shear_seeded(std::uint64_t seed, double initial_radius = 0.0) {
    return shear_squares(
        [seed](long k) {
            return detail::unit_double(
                detail::splitmix64(seed ^ (0xabcdef123456789ull + static_cast<std::uint64_t>(k))));
        },
        "shear-seeded-" + std::to_string(seed), initial_radius);
}

// Penrose rhomb tiling by inflate-and-subdivide from a ten-triangle wheel.
// Rotated rhomb poses are folded into the prototile table, so placements are
// pure translations and the tiling space is a translation one.
inline WindowProviderPtr penrose(double initial_radius = 0.0) {
    WindowProvider::Core core;
    core.description = "penrose";
    core.exact_restriction = false;
    core.build = [](double radius) {
        const double phi = 0.5 * (1.0 + std::sqrt(5.0));
        const double inv_phi = 1.0 / phi;
        const double margin = 3.5;
        const int depth = std::max(
            1, static_cast<int>(std::ceil(std::log((radius + margin) / 0.90) / std::log(phi))));
        const double scale = std::pow(phi, depth);

        struct Tri {
            bool blue;
            Vec2 a, b, c;
        };
        std::vector<Tri> cur, next;
        for (int i = 0; i < 10; ++i) {
            const int i1 = (i + i % 2) % 10;
            const int i2 = (i + 1 - i % 2) % 10;
            const double t1 = 2.0 * kPi * i1 / 10.0;
            const double t2 = 2.0 * kPi * i2 / 10.0;
            cur.push_back({false,
                           {0, 0},
                           {scale * std::cos(t1), scale * std::sin(t1)},
                           {scale * std::cos(t2), scale * std::sin(t2)}});
        }

        const double keep_radius = radius + margin;
        const auto keep = [&](std::vector<Tri>& dst, const Tri& t) {
            if (point_polygon_distance({0, 0}, Polygon{t.a, t.b, t.c}) <= keep_radius)
                dst.push_back(t);
        };
        for (int level = 0; level < depth; ++level) {
            next.clear();
            next.reserve(cur.size() * 3);
            for (const Tri& t : cur) {
                if (!t.blue) {
                    const Vec2 p = t.a + inv_phi * (t.b - t.a);
                    keep(next, {false, t.c, p, t.b});
                    keep(next, {true, p, t.c, t.a});
                } else {
                    const Vec2 q = t.b + inv_phi * (t.a - t.b);
                    const Vec2 r = t.b + inv_phi * (t.c - t.b);
                    keep(next, {true, r, t.c, t.a});
                    keep(next, {true, q, r, t.b});
                    keep(next, {false, r, q, t.a});
                }
            }
            cur.swap(next);
        }

        // Pair halves across their base edge (b, c) into rhombs.
        const auto vkey = [](Vec2 v) {
            return std::pair<std::int64_t, std::int64_t>{detail::quantize(v.x, 1e-7),
                                                         detail::quantize(v.y, 1e-7)};
        };
        std::map<std::tuple<std::pair<std::int64_t, std::int64_t>,
                            std::pair<std::int64_t, std::int64_t>, bool>,
                 std::size_t>
            half;
        std::vector<Polygon> rhombs;
        for (std::size_t i = 0; i < cur.size(); ++i) {
            auto kb = vkey(cur[i].b), kc = vkey(cur[i].c);
            auto key = std::make_tuple(std::min(kb, kc), std::max(kb, kc), cur[i].blue);
            auto it = half.find(key);
            if (it == half.end()) {
                half.emplace(key, i);
                continue;
            }
            const Tri& s = cur[it->second];
            const Tri& t = cur[i];
            Polygon quad{s.a, s.b, t.a, s.c};
            if (polygon_signed_area(quad) < 0.0) std::reverse(quad.begin(), quad.end());
            rhombs.push_back(std::move(quad));
            half.erase(it);
        }

        // Fold poses into a finite prototile table keyed by the canonical
        // (least-vertex-at-origin) quantized polygon.
        std::vector<Prototile> protos;
        std::vector<std::vector<std::int64_t>> proto_keys;
        std::vector<PlacedTile> tiles;
        for (const Polygon& quad : rhombs) {
            Vec2 least = quad[0];
            for (Vec2 v : quad)
                if (lex_less(v, least)) least = v;
            Polygon canon = quad;
            for (Vec2& v : canon) v = v - least;
            const auto key = detail::polygon_record(canon, 1e-6);
            int idx = -1;
            for (std::size_t k = 0; k < proto_keys.size(); ++k)
                if (proto_keys[k] == key) {
                    idx = static_cast<int>(k);
                    break;
                }
            if (idx < 0) {
                idx = static_cast<int>(protos.size());
                // Rotate the stored polygon so its least vertex comes first.
                std::size_t start = 0;
                for (std::size_t k = 1; k < canon.size(); ++k)
                    if (lex_less(canon[k], canon[start])) start = k;
                std::rotate(canon.begin(), canon.begin() + start, canon.end());
                protos.push_back({"", canon});
                proto_keys.push_back(key);
            }
            tiles.push_back({idx, Isometry2::translate(least)});
        }

        // Stable ids: sort prototiles by shape then record.
        std::vector<std::size_t> order(protos.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const double aa = polygon_area(protos[a].polygon);
            const double ab = polygon_area(protos[b].polygon);
            if (std::abs(aa - ab) > 1e-9) return aa < ab;
            return proto_keys[a] < proto_keys[b];
        });
        std::vector<int> rank(protos.size());
        std::vector<Prototile> sorted(protos.size());
        int n_thin = 0, n_thick = 0;
        const double thin_area = std::sin(kPi / 5.0);  // rhomb side 1
        for (std::size_t pos = 0; pos < order.size(); ++pos) {
            rank[order[pos]] = static_cast<int>(pos);
            sorted[pos] = protos[order[pos]];
            const bool thin = std::abs(polygon_area(sorted[pos].polygon) - thin_area) < 0.1;
            sorted[pos].id = (thin ? "thin" : "thick") + std::to_string(thin ? n_thin++ : n_thick++);
        }
        for (PlacedTile& t : tiles) t.proto = rank[t.proto];

        auto table = std::make_shared<PrototileTable>(std::move(sorted));
        tiles = detail::sort_tiles(*table, std::move(tiles));
        return std::make_pair(PrototileTablePtr(table), std::move(tiles));
    };
    return std::make_shared<WindowProvider>(std::move(core), initial_radius);
}

// Conway-Radin pinwheel: 1-2-sqrt(5) right triangle, five children at scale
// 1/sqrt(5) (altitude piece plus the medial quartering of the rest).
// Placements are general direct isometries over the two chiral prototiles.
inline WindowProviderPtr pinwheel(double initial_radius = 0.0) {
    WindowProvider::Core core;
    core.description = "pinwheel";
    core.exact_restriction = false;
    core.build = [](double radius) {
        const double sqrt5 = std::sqrt(5.0);
        const double inradius_factor = (3.0 - sqrt5) / 2.0;  // incenter of legs (1,2)
        const double margin = 4.0;
        const int depth = std::max(
            1, static_cast<int>(
                   std::ceil(std::log((radius + margin) / (inradius_factor * 0.9)) /
                             std::log(sqrt5))));
        const double scale = std::pow(sqrt5, depth);

        struct Tri {
            Vec2 r, s, l;  // right-angle vertex, short-leg end, long-leg end
        };
        const double rho = scale * inradius_factor;
        std::vector<Tri> cur{{{-rho, -rho}, {-rho, scale - rho}, {2.0 * scale - rho, -rho}}};
        std::vector<Tri> next;

        const double keep_radius = radius + margin;
        const auto keep = [&](std::vector<Tri>& dst, const Tri& t) {
            if (point_polygon_distance({0, 0}, Polygon{t.r, t.s, t.l}) <= keep_radius)
                dst.push_back(t);
        };
        for (int level = 0; level < depth; ++level) {
            next.clear();
            next.reserve(cur.size() * 5);
            for (const Tri& t : cur) {
                const Vec2 f = t.l + 0.8 * (t.s - t.l);
                const Vec2 g = t.l + 0.4 * (t.s - t.l);
                const Vec2 m = 0.5 * (t.l + t.r);
                const Vec2 k = 0.5 * (f + t.r);
                keep(next, {f, t.s, t.r});
                keep(next, {g, m, t.l});
                keep(next, {f, k, g});
                keep(next, {m, g, k});
                keep(next, {k, t.r, m});
            }
            cur.swap(next);
        }

        auto table = std::make_shared<PrototileTable>(std::vector<Prototile>{
            {"pinA", Polygon{{0, 0}, {2, 0}, {0, 1}}},   // cross(s-r, l-r) < 0
            {"pinB", Polygon{{0, 0}, {1, 0}, {0, 2}}}}); // cross(s-r, l-r) > 0

        std::vector<PlacedTile> tiles;
        tiles.reserve(cur.size());
        for (const Tri& t : cur) {
            const double orient = cross(t.s - t.r, t.l - t.r);
            const Vec2 u = (1.0 / norm(t.s - t.r)) * (t.s - t.r);  // placed short-leg direction
            Mat2 rot;
            int proto;
            if (orient < 0.0) {
                proto = 0;  // pinA short leg is (0,1)
                rot = Mat2{u.y, u.x, -u.x, u.y};
            } else {
                proto = 1;  // pinB short leg is (1,0)
                rot = Mat2{u.x, -u.y, u.y, u.x};
            }
            tiles.push_back({proto, Isometry2{rot, t.r}});
        }
        tiles = detail::sort_tiles(*table, std::move(tiles));
        return std::make_pair(PrototileTablePtr(table), std::move(tiles));
    };
    return std::make_shared<WindowProvider>(std::move(core), initial_radius);
}

// View of another provider translated by v.
inline WindowProviderPtr translate_view(WindowProviderPtr base, Vec2 v,
                                        double initial_radius = 0.0) {
    WindowProvider::Core core;
    core.description = base->describe() + "+t";
    core.exact_restriction = true;
    core.build = [base, v](double radius) {
        auto w = base->window(radius + norm(v) + 1.0);
        std::vector<PlacedTile> tiles;
        tiles.reserve(w->tiles().size());
        const Isometry2 shift = Isometry2::translate(v);
        for (const PlacedTile& t : w->tiles()) tiles.push_back({t.proto, shift.compose(t.placement)});
        return std::make_pair(w->prototile_table(), std::move(tiles));
    };
    return std::make_shared<WindowProvider>(std::move(core), initial_radius);
}

// View of another provider moved by a direct isometry.
inline WindowProviderPtr isometry_view(WindowProviderPtr base, Isometry2 t,
                                       double initial_radius = 0.0) {
    WindowProvider::Core core;
    core.description = base->describe() + "+iso";
    core.exact_restriction = true;
    core.build = [base, t](double radius) {
        auto w = base->window(radius + norm(t.translation) + 1.0);
        std::vector<PlacedTile> tiles;
        tiles.reserve(w->tiles().size());
        for (const PlacedTile& pt : w->tiles()) tiles.push_back({pt.proto, t.compose(pt.placement)});
        return std::make_pair(w->prototile_table(), std::move(tiles));
    };
    return std::make_shared<WindowProvider>(std::move(core), initial_radius);
}

// Fixed imported window (for CLI metric/verify on files).
inline WindowProviderPtr fixed_window_provider(TilingWindow window) {
    auto shared = std::make_shared<TilingWindow>(std::move(window));
    WindowProvider::Core core;
    core.description = "file-window";
    core.exact_restriction = true;
    core.fixed_radius = shared->radius();
    core.build = [shared](double) {
        return std::make_pair(shared->prototile_table(), shared->tiles());
    };
    return std::make_shared<WindowProvider>(std::move(core), shared->radius());
}

struct GeneratorSpec {
    std::string kind;  // lattice | shear | penrose | pinwheel
    Vec2 basis1{1, 0}, basis2{0, 1};
    std::string shear_rule = "golden";  // golden | zero | seeded
    std::uint64_t seed = 0;
    double initial_radius = 0.0;
};

inline WindowProviderPtr make_provider(const GeneratorSpec& spec) {
    if (spec.kind == "lattice")
        return square_lattice(spec.basis1, spec.basis2, spec.initial_radius);
    if (spec.kind == "shear") {
        if (spec.shear_rule == "golden") return shear_golden(spec.initial_radius);
        if (spec.shear_rule == "zero") return shear_zero(spec.initial_radius);
        if (spec.shear_rule == "seeded") return shear_seeded(spec.seed, spec.initial_radius);
        throw std::invalid_argument("unknown shear rule: " + spec.shear_rule);
    }
    if (spec.kind == "penrose") return penrose(spec.initial_radius);
    if (spec.kind == "pinwheel") return pinwheel(spec.initial_radius);
    throw std::invalid_argument("unknown generator kind: " + spec.kind);
}

}  // namespace tilerec
