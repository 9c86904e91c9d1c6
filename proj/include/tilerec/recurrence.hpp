#pragma once

// Witness certificates for scaled pattern recurrence, their verification
// predicates, and the constructive search. A certificate asserts that a patch
// p with support over a disk of radius 1/epsilon reappears in the same tiling
// at every dilated pattern position n*u_i, up to the variant's correction
// class: a vector c_i with |c_i| < eps (thm1), a global isometry S_i in
// B_eps(E^2) (thm2), or one isometry per tile (thm3).
//
// The search never materializes the recurrent point or the orbit closure of
// the underlying topological argument; it scans the given tiling directly,
// n ascending (optionally restricted to an IP-set), anchors in lex order.

#include <optional>
#include <unordered_map>

#include "tilerec/generators.hpp"
#include "tilerec/ipsets.hpp"
#include "tilerec/parallel.hpp"
#include "tilerec/tiling.hpp"

namespace tilerec {

struct PatternF {
    std::vector<Vec2> vectors;

    void validate() const {
        if (vectors.empty()) throw std::invalid_argument("pattern F must be nonempty");
        for (std::size_t i = 0; i < vectors.size(); ++i)
            for (std::size_t j = i + 1; j < vectors.size(); ++j)
                if (dist(vectors[i], vectors[j]) < 1e-12)
                    throw std::invalid_argument("pattern F has duplicate vectors");
    }
    double max_norm() const {
        double m = 0.0;
        for (Vec2 u : vectors) m = std::max(m, norm(u));
        return m;
    }
};

enum class TheoremVariant { thm1, thm2, thm3 };

inline const char* to_string(TheoremVariant v) {
    switch (v) {
        case TheoremVariant::thm1: return "thm1";
        case TheoremVariant::thm2: return "thm2";
        default: return "thm3";
    }
}

struct WitnessCertificate {
    TheoremVariant variant = TheoremVariant::thm1;
    std::uint64_t n = 1;
    double epsilon = 0.0;
    Vec2 base;    // v; also the center of the supported disk
    Patch patch;  // p, a patch of x

    // thm1: corrections[i] is the pure translation by c_i.
    // thm2: corrections[i] is S_i.
    std::vector<Isometry2> corrections;
    // thm3: per_tile[i][j] is S_{i,j} for pattern vector i and patch tile j.
    std::vector<std::vector<Isometry2>> per_tile;
};

namespace detail {

inline double certificate_window_radius(const PatternF& f, const WitnessCertificate& cert,
                                        double d_max) {
    double far = 0.0;
    for (std::size_t i = 0; i < cert.patch.size(); ++i)
        for (Vec2 v : cert.patch.tile_polygon(i)) far = std::max(far, norm(v));
    return far + static_cast<double>(cert.n) * f.max_norm() + cert.epsilon + d_max + 1.0;
}

inline bool patch_in_window(const Patch& p, const TilingWindow& w, double tol) {
    for (std::size_t i = 0; i < p.size(); ++i)
        if (!w.find_matching_tile(p.tile_polygon(i), tol)) return false;
    return true;
}

inline bool moved_patch_in_window(const Patch& p, const Isometry2& motion,
                                  const TilingWindow& w, double tol) {
    for (std::size_t i = 0; i < p.size(); ++i)
        if (!w.find_matching_tile(apply_isometry(motion, p.tile_polygon(i)), tol)) return false;
    return true;
}

}  // namespace detail

// T_{n u_i + c_i} p ⊂ x with |c_i| < eps and supp(p) ⊇ B_{1/eps}(v).
inline bool verify_witness_thm1(const WindowProviderPtr& x, const PatternF& f,
                                const WitnessCertificate& cert, double tol_geom = 1e-9,
                                double tau_area_rel = 1e-6) {
    f.validate();
    if (cert.variant != TheoremVariant::thm1 || cert.n < 1) return false;
    if (cert.corrections.size() != f.vectors.size()) return false;
    if (!(cert.epsilon > 0.0) || cert.patch.empty()) return false;

    auto w = x->window(detail::certificate_window_radius(f, cert, x->max_tile_diameter()));
    if (!detail::patch_in_window(cert.patch, *w, tol_geom)) return false;
    if (!patch_support_contains_disk(cert.patch, 1.0 / cert.epsilon, cert.base, tau_area_rel))
        return false;

    for (std::size_t i = 0; i < f.vectors.size(); ++i) {
        const Isometry2& c = cert.corrections[i];
        if (operator_norm(c.rotation - Mat2::identity()) > tol_geom) return false;
        if (!(norm(c.translation) < cert.epsilon)) return false;
        const Vec2 shift = static_cast<double>(cert.n) * f.vectors[i] + c.translation;
        if (!detail::moved_patch_in_window(cert.patch, Isometry2::translate(shift), *w, tol_geom))
            return false;
    }
    return true;
}

// T_{n u_i + v} S_i T_{-v} p ⊂ x with S_i in B_eps(E^2), B_{1/eps}(v) ⊆ supp(p).
inline bool verify_witness_thm2(const WindowProviderPtr& x, const PatternF& f,
                                const WitnessCertificate& cert, double tol_geom = 1e-9,
                                double tau_area_rel = 1e-6) {
    f.validate();
    if (cert.variant != TheoremVariant::thm2 || cert.n < 1) return false;
    if (cert.corrections.size() != f.vectors.size()) return false;
    if (!(cert.epsilon > 0.0) || cert.patch.empty()) return false;

    auto w = x->window(detail::certificate_window_radius(f, cert, x->max_tile_diameter()));
    if (!detail::patch_in_window(cert.patch, *w, tol_geom)) return false;
    if (!patch_support_contains_disk(cert.patch, 1.0 / cert.epsilon, cert.base, tau_area_rel))
        return false;

    for (std::size_t i = 0; i < f.vectors.size(); ++i) {
        const Isometry2& s = cert.corrections[i];
        if (!s.valid(1e-7) || !in_epsilon_ball(s, cert.epsilon)) return false;
        const Isometry2 motion =
            Isometry2::translate(static_cast<double>(cert.n) * f.vectors[i] + cert.base)
                .compose(s)
                .compose(Isometry2::translate(-cert.base));
        if (!detail::moved_patch_in_window(cert.patch, motion, *w, tol_geom)) return false;
    }
    return true;
}

// T_{n u_i + v} S_{i,j} T_{-v} t_j ∈ x per tile, all S_{i,j} in B_eps(E^2).
inline bool verify_witness_thm3(const WindowProviderPtr& x, const PatternF& f,
                                const WitnessCertificate& cert, double tol_geom = 1e-9,
                                double tau_area_rel = 1e-6) {
    f.validate();
    if (cert.variant != TheoremVariant::thm3 || cert.n < 1) return false;
    if (cert.per_tile.size() != f.vectors.size()) return false;
    if (!(cert.epsilon > 0.0) || cert.patch.empty()) return false;

    auto w = x->window(detail::certificate_window_radius(f, cert, x->max_tile_diameter()));
    if (!detail::patch_in_window(cert.patch, *w, tol_geom)) return false;
    if (!patch_support_contains_disk(cert.patch, 1.0 / cert.epsilon, cert.base, tau_area_rel))
        return false;

    for (std::size_t i = 0; i < f.vectors.size(); ++i) {
        if (cert.per_tile[i].size() != cert.patch.size()) return false;
        for (std::size_t j = 0; j < cert.patch.size(); ++j) {
            const Isometry2& s = cert.per_tile[i][j];
            if (!s.valid(1e-7) || !in_epsilon_ball(s, cert.epsilon)) return false;
            const Isometry2 motion =
                Isometry2::translate(static_cast<double>(cert.n) * f.vectors[i] + cert.base)
                    .compose(s)
                    .compose(Isometry2::translate(-cert.base));
            if (!w->find_matching_tile(apply_isometry(motion, cert.patch.tile_polygon(j)),
                                       tol_geom))
                return false;
        }
    }
    return true;
}

inline bool verify_witness(const WindowProviderPtr& x, const PatternF& f,
                           const WitnessCertificate& cert, double tol_geom = 1e-9,
                           double tau_area_rel = 1e-6) {
    switch (cert.variant) {
        case TheoremVariant::thm1: return verify_witness_thm1(x, f, cert, tol_geom, tau_area_rel);
        case TheoremVariant::thm2: return verify_witness_thm2(x, f, cert, tol_geom, tau_area_rel);
        default: return verify_witness_thm3(x, f, cert, tol_geom, tau_area_rel);
    }
}

// A thm1 certificate is a thm2 certificate with pure-translation corrections.
inline WitnessCertificate certificate_as_thm2(const WitnessCertificate& cert) {
    WitnessCertificate out = cert;
    out.variant = TheoremVariant::thm2;
    // T_{nu+v} T_c T_{-v} = T_{nu+c}, so the translation passes through.
    return out;
}

// A thm2 certificate with a global S_i is a thm3 certificate with S_{i,j} = S_i.
inline WitnessCertificate certificate_as_thm3(const WitnessCertificate& cert) {
    WitnessCertificate out = cert;
    out.variant = TheoremVariant::thm3;
    out.per_tile.assign(cert.corrections.size(),
                        std::vector<Isometry2>(cert.patch.size(), Isometry2::identity()));
    for (std::size_t i = 0; i < cert.corrections.size(); ++i)
        out.per_tile[i].assign(cert.patch.size(), cert.corrections[i]);
    out.corrections.clear();
    return out;
}

// ---- patch index ----

// Hash-indexed protopatch occurrences on an anchor grid: answers "where does
// this protopatch recur" in expected constant time.
class PatchIndex {
  public:
    struct Entry {
        Vec2 anchor;
        Isometry2 align;  // canonicalizing pose of the patch at this anchor
    };

    const std::vector<Entry>* lookup(std::uint64_t hash) const {
        auto it = buckets_.find(hash);
        return it == buckets_.end() ? nullptr : &it->second;
    }
    std::size_t bucket_count() const { return buckets_.size(); }
    std::size_t anchor_count() const { return anchors_; }

    friend PatchIndex build_patch_index(const TilingWindow& w, double anchor_grid,
                                        double patch_radius, PatchMode mode, double q);

  private:
    std::unordered_map<std::uint64_t, std::vector<Entry>> buckets_;
    std::size_t anchors_ = 0;
};

inline PatchIndex build_patch_index(const TilingWindow& w, double anchor_grid,
                                    double patch_radius, PatchMode mode, double q = 1e-6) {
    if (!(patch_radius <= w.radius() / 4.0))
        throw std::invalid_argument("build_patch_index: patch_radius must be <= radius/4");
    PatchIndex index;
    const double reach = w.radius() - patch_radius;
    const long m = static_cast<long>(std::floor(reach / anchor_grid));
    for (long i = -m; i <= m; ++i) {
        for (long j = -m; j <= m; ++j) {
            const Vec2 anchor{static_cast<double>(i) * anchor_grid,
                              static_cast<double>(j) * anchor_grid};
            if (norm(anchor) > reach) continue;
            Patch p = patches_covering(w, patch_radius, anchor);
            if (p.empty()) continue;
            CanonicalProtopatch canon = canonicalize(p, mode, q);
            index.buckets_[canon.hash].push_back({anchor, canon.pose});
            ++index.anchors_;
        }
    }
    return index;
}

// ---- search ----

struct SearchOptions {
    double anchor_grid = 0.0;  // 0: eps/4
    unsigned threads = 0;
    double tol_geom = 1e-9;
    double tau_area_rel = 1e-6;
    std::size_t batch = 1024;  // anchors evaluated per parallel wave
};

namespace detail {

struct AnchorKey {
    long ix, iy;
    bool operator<(const AnchorKey& o) const {
        return ix < o.ix || (ix == o.ix && iy < o.iy);
    }
};

// Candidate correction translations for a probe polygon near a target
// displacement: w = centroid(s) - centroid(probe) over same-shape tiles s,
// |w - target| < eps. Sorted by (|w - target|, w.x, w.y).
inline std::vector<Vec2> probe_translations(const TilingWindow& w, const Polygon& probe_poly,
                                            Vec2 probe_centroid, Vec2 target, double eps,
                                            double tol) {
    std::vector<Vec2> out;
    w.for_each_tile_near(probe_centroid + target, eps + tol, [&](std::size_t j) {
        const Vec2 v = w.tile_centroid(j) - probe_centroid;
        if (!(norm(v - target) < eps)) return;
        if (polygon_equal(apply_isometry(Isometry2::translate(v), probe_poly),
                          w.tile_polygon(j), tol))
            out.push_back(v);
    });
    std::sort(out.begin(), out.end(), [&](Vec2 a, Vec2 b) {
        const double da = norm(a - target), db = norm(b - target);
        if (da != db) return da < db;
        return lex_less(a, b);
    });
    return out;
}

// Candidate motions for thm2/thm3: congruence alignments of `poly` onto
// nearby tiles whose conjugated correction lands in B_eps. Returns pairs
// (correction S, motion M) sorted by the isometry distance of S.
inline std::vector<std::pair<Isometry2, Isometry2>> probe_motions(
    const TilingWindow& w, const Polygon& poly, Vec2 centroid, Vec2 base, Vec2 shift,
    double eps, double d_max, double tol) {
    std::vector<std::pair<Isometry2, Isometry2>> out;
    const double reach = eps * (dist(centroid, base) + d_max + 1.0) + tol;
    const Isometry2 unshift = Isometry2::translate(-(base + shift));
    const Isometry2 reshift = Isometry2::translate(base);
    w.for_each_tile_near(centroid + shift, reach, [&](std::size_t j) {
        for (const Isometry2& m : congruence_maps(poly, w.tile_polygon(j), tol)) {
            // S = T_{-(nu+v)} M T_{v}
            const Isometry2 s = unshift.compose(m).compose(reshift);
            if (in_epsilon_ball(s, eps)) out.push_back({s, m});
        }
    });
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        const double da = isometry_distance(a.first, Isometry2::identity());
        const double db = isometry_distance(b.first, Isometry2::identity());
        if (da != db) return da < db;
        if (a.first.translation.x != b.first.translation.x)
            return a.first.translation.x < b.first.translation.x;
        return a.first.translation.y < b.first.translation.y;
    });
    return out;
}

}  // namespace detail

// Constructive search for the certificate the theorems assert exists.
// Iterates n ascending (restricted to the IP-set when given), then candidate
// bases v on the anchor grid in lex order; the first verified certificate
// under that order is returned. Nothing is returned when the budget is
// exhausted; that is not a refutation.
inline std::optional<WitnessCertificate> search_witness(
    const WindowProviderPtr& x, const PatternF& f, double eps, TheoremVariant variant,
    std::uint64_t n_budget, double r_search, const std::optional<IPSetSpec>& ip = std::nullopt,
    const SearchOptions& opts = {}) {
    f.validate();
    if (!(eps > 0.0)) throw std::invalid_argument("search_witness: eps must be > 0");
    const double k_rad = 1.0 / eps;
    const double d_max = x->max_tile_diameter();
    if (k_rad + d_max + 1.0 > r_search)
        throw insufficient_window("search_witness: R_search too small for the 1/eps patch");

    auto w = x->window(r_search);
    const double grid = opts.anchor_grid > 0.0 ? opts.anchor_grid : eps / 4.0;
    const double u_max = f.max_norm();
    const double tol = opts.tol_geom;

    for (std::uint64_t n = 1; n <= n_budget; ++n) {
        if (ip && !ip_contains(*ip, n)) continue;
        // The margin keeps every certificate verifiable inside the same
        // window: 2 d_max covers the patch overhang plus the verify slack.
        const double v_max =
            r_search - (k_rad + static_cast<double>(n) * u_max + eps + 2.0 * d_max + 2.0);
        if (v_max < 0.0) {
            if (ip) continue;  // later IP elements only grow n
            break;
        }

        // Tile-level prefilter: the tile containing v must itself recur near
        // every target, so anchors inside non-recurring tiles cannot win.
        // For the isometry variants the conjugated correction S has
        // translation (A - I) v + beta - n u, so a candidate alignment (A, b)
        // survives only if that expression can drop below eps for some v in
        // the tile; the minimum is an exact point-to-polygon distance.
        //
        // For thm3 every tile moves on its own, so feasibility is a per-tile
        // question: memoized over the window with the v-range relaxed to the
        // surrounding disk, and demanded at interior sample points that lie
        // inside the patch for every anchor of the tile.
        std::vector<std::vector<std::int8_t>> feasible_memo;
        if (variant == TheoremVariant::thm3) {
            feasible_memo.assign(f.vectors.size(),
                                 std::vector<std::int8_t>(w->tiles().size(), 0));
            const double rho = k_rad + d_max;  // |v - c_tt| bound inside a patch
            for (std::size_t ui = 0; ui < f.vectors.size(); ++ui) {
                const Vec2 shift = static_cast<double>(n) * f.vectors[ui];
                parallel_for(w->tiles().size(), opts.threads, [&](std::size_t tt) {
                    const Vec2 cc = w->tile_centroid(tt);
                    if (norm(cc) > v_max + k_rad + 2.0 * d_max) return;
                    bool feasible = false;
                    const double reach = eps * (rho + d_max + 1.0) + tol;
                    w->for_each_tile_near(cc + shift, reach, [&](std::size_t j) {
                        if (feasible) return;
                        for (const Isometry2& m :
                             congruence_maps(w->tile_polygon(tt), w->tile_polygon(j), tol)) {
                            const double bend = operator_norm(m.rotation - Mat2::identity());
                            if (bend >= eps) continue;
                            const Vec2 at_center =
                                m.rotation * cc - cc + m.translation - shift;
                            if (norm(at_center) - bend * rho < eps + tol) {
                                feasible = true;
                                return;
                            }
                        }
                    });
                    feasible_memo[ui][tt] = feasible ? 1 : 0;
                });
            }
        }

        std::vector<char> pass(w->tiles().size(), 0);
        parallel_for(w->tiles().size(), opts.threads, [&](std::size_t t) {
            const Vec2 c = w->tile_centroid(t);
            if (norm(c) > v_max + d_max) return;
            if (variant == TheoremVariant::thm3) {
                // Probe plus interior sample points that land in the patch
                // for every anchor inside this tile. The span is clamped:
                // with k_rad <= d_max only the probe itself is certain.
                const double span = std::max(0.0, k_rad - d_max);
                for (std::size_t ui = 0; ui < f.vectors.size(); ++ui) {
                    if (!feasible_memo[ui][t]) return;
                    if (span <= 0.0) continue;
                    for (Vec2 dir : {Vec2{1, 0}, Vec2{-1, 0}, Vec2{0, 1}, Vec2{0, -1}}) {
                        for (double frac : {1.0 / 3.0, 2.0 / 3.0, 1.0}) {
                            const Vec2 p = c + frac * span * dir;
                            const auto tt = w->locate(p);
                            if (!tt || !feasible_memo[ui][*tt]) return;
                        }
                    }
                }
                pass[t] = 1;
                return;
            }
            for (Vec2 u : f.vectors) {
                const Vec2 shift = static_cast<double>(n) * u;
                const Vec2 target = c + shift;
                bool any = false;
                if (variant == TheoremVariant::thm1) {
                    w->for_each_tile_near(target, eps + tol, [&](std::size_t j) {
                        if (any) return;
                        const Vec2 v = w->tile_centroid(j) - c;
                        if (!(norm(v - shift) < eps)) return;
                        if (polygon_equal(
                                apply_isometry(Isometry2::translate(v), w->tile_polygon(t)),
                                w->tile_polygon(j), tol))
                            any = true;
                    });
                } else {
                    // thm2: a global motion must carry the probe and all
                    // four rim companions. The conjugated correction S has
                    // translation (A - I) v + b - n u with v in the probe
                    // tile, minimized exactly as a point-polygon distance.
                    const auto companion_follows = [&](const Isometry2& m, Vec2 dir) {
                        const Vec2 q = c + (k_rad - 1e-6) * dir;
                        bool ok = false;
                        w->for_each_tile_near(q, 2.0 * d_max + 1e-6, [&](std::size_t ft) {
                            if (ok) return;
                            const Vec2 img = m(w->tile_centroid(ft));
                            w->for_each_tile_near(img, 1e-5, [&](std::size_t mt) {
                                if (!ok &&
                                    w->prototiles().congruence_class(w->tiles()[ft].proto) ==
                                        w->prototiles().congruence_class(w->tiles()[mt].proto))
                                    ok = true;
                            });
                        });
                        return ok;
                    };
                    const double reach = eps * (d_max + 1.0) + tol;
                    w->for_each_tile_near(target, reach, [&](std::size_t j) {
                        if (any) return;
                        for (const Isometry2& m :
                             congruence_maps(w->tile_polygon(t), w->tile_polygon(j), tol)) {
                            if (operator_norm(m.rotation - Mat2::identity()) >= eps) continue;
                            const Mat2 a_minus_id = m.rotation - Mat2::identity();
                            Polygon image;
                            image.reserve(w->tile_polygon(t).size());
                            for (Vec2 p : w->tile_polygon(t)) image.push_back(a_minus_id * p);
                            const Vec2 want = shift - m.translation;
                            if (point_polygon_distance(want, image) >= eps + tol) continue;
                            bool coherent_ok = true;
                            for (Vec2 dir : {Vec2{1, 0}, Vec2{-1, 0}, Vec2{0, 1}, Vec2{0, -1}}) {
                                if (!companion_follows(m, dir)) {
                                    coherent_ok = false;
                                    break;
                                }
                            }
                            if (coherent_ok) {
                                any = true;
                                break;
                            }
                        }
                    });
                }
                if (!any) return;
            }
            pass[t] = 1;
        });

        // Candidate anchors in lex order: every grid point inside the
        // bounding box of a surviving tile. evaluate() re-resolves the
        // containing tile, so overshoot here only costs a cheap rejection.
        std::vector<detail::AnchorKey> anchors;
        for (std::size_t t = 0; t < w->tiles().size(); ++t) {
            if (!pass[t]) continue;
            const Polygon& poly = w->tile_polygon(t);
            double x0 = poly[0].x, x1 = poly[0].x, y0 = poly[0].y, y1 = poly[0].y;
            for (Vec2 v : poly) {
                x0 = std::min(x0, v.x);
                x1 = std::max(x1, v.x);
                y0 = std::min(y0, v.y);
                y1 = std::max(y1, v.y);
            }
            for (long i = static_cast<long>(std::ceil(x0 / grid));
                 i <= static_cast<long>(std::floor(x1 / grid)); ++i) {
                for (long j = static_cast<long>(std::ceil(y0 / grid));
                     j <= static_cast<long>(std::floor(y1 / grid)); ++j) {
                    if (std::hypot(static_cast<double>(i), static_cast<double>(j)) * grid > v_max)
                        continue;
                    anchors.push_back({i, j});
                }
            }
        }
        std::sort(anchors.begin(), anchors.end());
        anchors.erase(std::unique(anchors.begin(), anchors.end(),
                                  [](const detail::AnchorKey& a, const detail::AnchorKey& b) {
                                      return a.ix == b.ix && a.iy == b.iy;
                                  }),
                      anchors.end());

        const auto evaluate = [&](const detail::AnchorKey& key)
            -> std::optional<WitnessCertificate> {
            const Vec2 v{static_cast<double>(key.ix) * grid, static_cast<double>(key.iy) * grid};
            const auto probe = w->locate(v);
            if (!probe || !pass[*probe]) return std::nullopt;
            const Polygon& probe_poly = w->tile_polygon(*probe);
            const Vec2 probe_c = w->tile_centroid(*probe);

            // Cheap rejection ladder before touching the full patch: exact
            // probe-tile candidates first, then each surviving motion must
            // also carry the four rim tiles of the disk onto the tiling.
            std::vector<Polygon> rim_polys;
            for (Vec2 dir : {Vec2{1, 0}, Vec2{-1, 0}, Vec2{0, 1}, Vec2{0, -1}}) {
                const auto rim = w->locate(v + (k_rad - 1e-6) * dir);
                if (!rim) return std::nullopt;
                rim_polys.push_back(w->tile_polygon(*rim));
            }
            const auto rims_follow = [&](const Isometry2& m) {
                for (const Polygon& poly : rim_polys)
                    if (!w->find_matching_tile(apply_isometry(m, poly), tol)) return false;
                return true;
            };

            if (variant == TheoremVariant::thm3) {
                // Per-tile corrections: the probe and every rim tile must
                // each admit an own motion before the patch is worth it.
                for (Vec2 u : f.vectors) {
                    const Vec2 shift = static_cast<double>(n) * u;
                    if (detail::probe_motions(*w, probe_poly, probe_c, v, shift, eps, d_max, tol)
                            .empty())
                        return std::nullopt;
                    for (const Polygon& poly : rim_polys)
                        if (detail::probe_motions(*w, poly, polygon_centroid(poly), v, shift,
                                                  eps, d_max, tol)
                                .empty())
                            return std::nullopt;
                }
            }

            struct TargetPlan {
                std::vector<Vec2> translations;                       // thm1
                std::vector<std::pair<Isometry2, Isometry2>> motions;  // thm2
            };
            std::vector<TargetPlan> plans(f.vectors.size());
            if (variant != TheoremVariant::thm3) {
                for (std::size_t i = 0; i < f.vectors.size(); ++i) {
                    const Vec2 shift = static_cast<double>(n) * f.vectors[i];
                    TargetPlan& plan = plans[i];
                    if (variant == TheoremVariant::thm1) {
                        for (Vec2 cand : detail::probe_translations(*w, probe_poly, probe_c,
                                                                    shift, eps, tol)) {
                            if (rims_follow(Isometry2::translate(cand)))
                                plan.translations.push_back(cand);
                        }
                        if (plan.translations.empty()) return std::nullopt;
                    } else {
                        for (auto& sm : detail::probe_motions(*w, probe_poly, probe_c, v, shift,
                                                              eps, d_max, tol)) {
                            if (rims_follow(sm.second)) plan.motions.push_back(sm);
                        }
                        if (plan.motions.empty()) return std::nullopt;
                    }
                }
            }

            Patch p = patches_covering(*w, k_rad, v, tol);
            if (p.empty()) return std::nullopt;
            // Rim tiles first so failed candidates die in a couple of probes.
            {
                std::vector<std::pair<double, std::size_t>> order(p.size());
                for (std::size_t i = 0; i < p.size(); ++i)
                    order[i] = {-dist(polygon_centroid(p.tile_polygon(i)), v), i};
                std::sort(order.begin(), order.end());
                std::vector<PlacedTile> sorted;
                sorted.reserve(p.size());
                for (const auto& [key2, i] : order) sorted.push_back(p.tiles[i]);
                p.tiles = std::move(sorted);
            }

            WitnessCertificate cert;
            cert.variant = variant;
            cert.n = n;
            cert.epsilon = eps;
            cert.base = v;
            cert.patch = p;

            for (std::size_t i = 0; i < f.vectors.size(); ++i) {
                const Vec2 shift = static_cast<double>(n) * f.vectors[i];
                bool done = false;
                if (variant == TheoremVariant::thm1) {
                    for (Vec2 cand : plans[i].translations) {
                        if (detail::moved_patch_in_window(p, Isometry2::translate(cand), *w,
                                                          tol)) {
                            cert.corrections.push_back(Isometry2::translate(cand - shift));
                            done = true;
                            break;
                        }
                    }
                } else if (variant == TheoremVariant::thm2) {
                    for (const auto& [s, m] : plans[i].motions) {
                        if (detail::moved_patch_in_window(p, m, *w, tol)) {
                            cert.corrections.push_back(s);
                            done = true;
                            break;
                        }
                    }
                } else {
                    std::vector<Isometry2> per_tile;
                    per_tile.reserve(p.size());
                    bool all = true;
                    for (std::size_t ti = 0; ti < p.size(); ++ti) {
                        const Polygon poly = p.tile_polygon(ti);
                        auto cands = detail::probe_motions(*w, poly, polygon_centroid(poly), v,
                                                           shift, eps, d_max, tol);
                        if (cands.empty()) {
                            all = false;
                            break;
                        }
                        per_tile.push_back(cands.front().first);
                    }
                    if (all) {
                        cert.per_tile.push_back(std::move(per_tile));
                        done = true;
                    }
                }
                if (!done) return std::nullopt;
            }
            if (!patch_support_contains_disk(p, k_rad, v, opts.tau_area_rel))
                return std::nullopt;
            return cert;
        };

        for (std::size_t begin = 0; begin < anchors.size(); begin += opts.batch) {
            const std::size_t count = std::min(opts.batch, anchors.size() - begin);
            auto best = parallel_min<std::pair<detail::AnchorKey, WitnessCertificate>>(
                count, opts.threads,
                [&](std::size_t i) -> std::optional<std::pair<detail::AnchorKey,
                                                              WitnessCertificate>> {
                    const detail::AnchorKey key = anchors[begin + i];
                    if (auto cert = evaluate(key)) return std::make_pair(key, std::move(*cert));
                    return std::nullopt;
                },
                [](const auto& a, const auto& b) { return a.first < b.first; });
            if (best) return std::move(best->second);
        }
    }
    return std::nullopt;
}

}  // namespace tilerec
