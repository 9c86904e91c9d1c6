#pragma once

// Planar primitives: vectors, 2x2 matrices, direct isometries, segments,
// polygons, disk clipping and a sampled Hausdorff distance with a certified
// error bound. Everything here is a pure value type.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace tilerec {

inline constexpr double kPi = 3.14159265358979323846;

struct Tolerances {
    double geom = 1e-9;      // coincidence of points / segments
    double iso = 1e-9;       // orthogonality / determinant slack
    double area_rel = 1e-6;  // relative area slack for covers/packs checks
    double quantum = 1e-6;   // pose quantization step for hashing
};

struct empty_input : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct insufficient_window : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
    friend Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
    friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm2(Vec2 a) { return dot(a, a); }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double dist(Vec2 a, Vec2 b) { return norm(a - b); }

// Lexicographic (x, then y) with a coincidence tolerance on x.
inline bool lex_less(Vec2 a, Vec2 b, double tol = 0.0) {
    if (a.x < b.x - tol) return true;
    if (a.x > b.x + tol) return false;
    return a.y < b.y - tol;
}

// Column-major is irrelevant at 2x2; entries are
//   [ a  b ]
//   [ c  d ]
struct Mat2 {
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

    static Mat2 identity() { return {}; }
    static Mat2 rotation(double theta) {
        const double co = std::cos(theta), si = std::sin(theta);
        return {co, -si, si, co};
    }

    friend Mat2 operator*(const Mat2& m, const Mat2& n) {
        return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
                m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
    }
    friend Vec2 operator*(const Mat2& m, Vec2 v) {
        return {m.a * v.x + m.b * v.y, m.c * v.x + m.d * v.y};
    }
    friend Mat2 operator-(const Mat2& m, const Mat2& n) {
        return {m.a - n.a, m.b - n.b, m.c - n.c, m.d - n.d};
    }

    Mat2 transposed() const { return {a, c, b, d}; }
    double det() const { return a * d - b * c; }
};

// Largest singular value, closed form for 2x2.
inline double operator_norm(const Mat2& m) {
    const double s1 = m.a * m.a + m.b * m.b + m.c * m.c + m.d * m.d;
    const double u = m.a * m.a + m.b * m.b - m.c * m.c - m.d * m.d;
    const double v = 2.0 * (m.a * m.c + m.b * m.d);
    const double s2 = std::sqrt(u * u + v * v);
    return std::sqrt(std::max(0.0, 0.5 * (s1 + s2)));
}

// Orientation-preserving isometry p -> A p + b with A in SO(2).
struct Isometry2 {
    Mat2 rotation;
    Vec2 translation;

    static Isometry2 identity() { return {}; }
    static Isometry2 translate(Vec2 v) { return {Mat2::identity(), v}; }
    static Isometry2 rotate(double theta) { return {Mat2::rotation(theta), {0, 0}}; }
    static Isometry2 rotate_about(double theta, Vec2 center) {
        Mat2 r = Mat2::rotation(theta);
        return {r, center - r * center};
    }

    Vec2 operator()(Vec2 p) const { return rotation * p + translation; }

    // this after other: (*this) ∘ other
    Isometry2 compose(const Isometry2& other) const {
        return {rotation * other.rotation, rotation * other.translation + translation};
    }
    Isometry2 inverse() const {
        Mat2 rt = rotation.transposed();
        return {rt, -(rt * translation)};
    }
    double angle() const { return std::atan2(rotation.c, rotation.a); }

    bool valid(double tol_iso = 1e-9) const {
        Mat2 g = rotation.transposed() * rotation;
        const bool ortho = std::abs(g.a - 1.0) <= tol_iso && std::abs(g.d - 1.0) <= tol_iso &&
                           std::abs(g.b) <= tol_iso && std::abs(g.c) <= tol_iso;
        return ortho && std::abs(rotation.det() - 1.0) <= tol_iso &&
               std::isfinite(translation.x) && std::isfinite(translation.y);
    }
};

// max(||A1 - A2||, ||b1 - b2||); the operator norm reading of the matrix part.
inline double isometry_distance(const Isometry2& t1, const Isometry2& t2) {
    return std::max(operator_norm(t1.rotation - t2.rotation),
                    dist(t1.translation, t2.translation));
}

inline bool in_epsilon_ball(const Isometry2& t, double eps) {
    return isometry_distance(t, Isometry2::identity()) < eps;
}

struct Segment {
    Vec2 a;
    Vec2 b;
};

using SegmentSet = std::vector<Segment>;
using Polygon = std::vector<Vec2>;

inline Vec2 apply_isometry(const Isometry2& t, Vec2 p) { return t(p); }
inline Segment apply_isometry(const Isometry2& t, const Segment& s) {
    return {t(s.a), t(s.b)};
}
inline SegmentSet apply_isometry(const Isometry2& t, const SegmentSet& set) {
    SegmentSet out;
    out.reserve(set.size());
    for (const Segment& s : set) out.push_back(apply_isometry(t, s));
    return out;
}
inline Polygon apply_isometry(const Isometry2& t, const Polygon& poly) {
    Polygon out;
    out.reserve(poly.size());
    for (Vec2 p : poly) out.push_back(t(p));
    return out;
}

// Intersection of one segment with the closed disk |p| <= n, via the
// line-circle quadratic. Degenerate (tangent point) results are dropped.
inline std::optional<Segment> clip_segment_to_disk(const Segment& s, double n,
                                                   double tol = 1e-12) {
    const Vec2 d = s.b - s.a;
    const double aa = norm2(d);
    if (aa == 0.0) return std::nullopt;
    const double bb = 2.0 * dot(s.a, d);
    const double cc = norm2(s.a) - n * n;
    const double disc = bb * bb - 4.0 * aa * cc;
    if (disc < 0.0) return std::nullopt;
    const double root = std::sqrt(disc);
    double t0 = (-bb - root) / (2.0 * aa);
    double t1 = (-bb + root) / (2.0 * aa);
    t0 = std::max(t0, 0.0);
    t1 = std::min(t1, 1.0);
    if (t1 - t0 <= tol) return std::nullopt;
    return Segment{s.a + t0 * d, s.a + t1 * d};
}

inline SegmentSet clip_to_disk(const SegmentSet& set, double n) {
    SegmentSet out;
    out.reserve(set.size());
    for (const Segment& s : set)
        if (auto c = clip_segment_to_disk(s, n)) out.push_back(*c);
    return out;
}

inline double point_segment_distance(Vec2 p, const Segment& s) {
    const Vec2 d = s.b - s.a;
    const double len2 = norm2(d);
    if (len2 == 0.0) return dist(p, s.a);
    const double t = std::clamp(dot(p - s.a, d) / len2, 0.0, 1.0);
    return dist(p, s.a + t * d);
}

namespace detail {

// Uniform bucket grid over segments for nearest-segment queries.
class SegmentGrid {
  public:
    explicit SegmentGrid(const SegmentSet& segments, double cell = 1.0)
        : segments_(&segments), cell_(cell) {
        for (std::size_t i = 0; i < segments.size(); ++i) {
            const Segment& s = segments[i];
            const double x0 = std::min(s.a.x, s.b.x), x1 = std::max(s.a.x, s.b.x);
            const double y0 = std::min(s.a.y, s.b.y), y1 = std::max(s.a.y, s.b.y);
            for (long cx = key(x0); cx <= key(x1); ++cx)
                for (long cy = key(y0); cy <= key(y1); ++cy)
                    buckets_[pack(cx, cy)].push_back(i);
        }
    }

    double nearest_distance(Vec2 p) const {
        const long px = key(p.x), py = key(p.y);
        double best = std::numeric_limits<double>::infinity();
        for (long ring = 0;; ++ring) {
            // Once the ring onset distance exceeds the best hit, stop.
            if (ring > 0 && (static_cast<double>(ring) - 1.0) * cell_ >= best) break;
            bool any_cell = false;
            for (long cx = px - ring; cx <= px + ring; ++cx) {
                for (long cy = py - ring; cy <= py + ring; ++cy) {
                    if (std::max(std::abs(cx - px), std::abs(cy - py)) != ring) continue;
                    auto it = buckets_.find(pack(cx, cy));
                    if (it == buckets_.end()) continue;
                    any_cell = true;
                    for (std::size_t i : it->second)
                        best = std::min(best, point_segment_distance(p, (*segments_)[i]));
                }
            }
            if (!any_cell && ring > max_ring_guard_) break;
        }
        return best;
    }

  private:
    long key(double v) const { return static_cast<long>(std::floor(v / cell_)); }
    static std::uint64_t pack(long x, long y) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(x)) << 32) |
               static_cast<std::uint64_t>(static_cast<std::uint32_t>(y));
    }

    const SegmentSet* segments_;
    double cell_;
    long max_ring_guard_ = 1 << 20;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets_;
};

inline void sample_segment(const Segment& s, double pitch, std::vector<Vec2>& out) {
    const double len = dist(s.a, s.b);
    const int steps = std::max(1, static_cast<int>(std::ceil(len / pitch)));
    for (int i = 0; i <= steps; ++i) {
        const double t = static_cast<double>(i) / steps;
        out.push_back(s.a + t * (s.b - s.a));
    }
}

}  // namespace detail

struct HausdorffResult {
    double value = 0.0;
    double error_bound = 0.0;
};

// Sampled Hausdorff distance between unions of segments. Sample points are
// placed at spacing <= delta along each segment (endpoints included) and
// measured against the other set with exact point-segment distances, so the
// returned value never exceeds the true distance and undershoots by at most
// delta. Symmetric in (a, b) by construction.
inline HausdorffResult hausdorff_distance(const SegmentSet& a, const SegmentSet& b,
                                          double delta) {
    if (a.empty() || b.empty()) throw empty_input("hausdorff_distance: empty segment set");
    if (!(delta > 0.0)) throw std::invalid_argument("hausdorff_distance: delta must be > 0");

    double cell = 0.0;
    for (const Segment& s : a) cell = std::max(cell, dist(s.a, s.b));
    for (const Segment& s : b) cell = std::max(cell, dist(s.a, s.b));
    cell = std::max(cell * 0.5, 4.0 * delta);

    const auto directed = [&](const SegmentSet& from, const SegmentSet& to) {
        detail::SegmentGrid grid(to, cell);
        std::vector<Vec2> samples;
        double worst = 0.0;
        for (const Segment& s : from) {
            samples.clear();
            detail::sample_segment(s, delta, samples);
            for (Vec2 p : samples) worst = std::max(worst, grid.nearest_distance(p));
        }
        return worst;
    };

    return {std::max(directed(a, b), directed(b, a)), delta};
}

// ---- polygon helpers ----

inline double polygon_signed_area(const Polygon& poly) {
    double s = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Vec2& p = poly[i];
        const Vec2& q = poly[(i + 1) % poly.size()];
        s += cross(p, q);
    }
    return 0.5 * s;
}

inline double polygon_area(const Polygon& poly) { return std::abs(polygon_signed_area(poly)); }

inline Vec2 polygon_centroid(const Polygon& poly) {
    double area6 = 0.0;
    Vec2 acc{0, 0};
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Vec2& p = poly[i];
        const Vec2& q = poly[(i + 1) % poly.size()];
        const double w = cross(p, q);
        area6 += w;
        acc = acc + w * (p + q);
    }
    if (area6 == 0.0) return poly.empty() ? Vec2{0, 0} : poly[0];
    return (1.0 / (3.0 * area6)) * acc;
}

inline bool point_in_polygon(Vec2 p, const Polygon& poly) {
    bool inside = false;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        const Vec2& pi = poly[i];
        const Vec2& pj = poly[j];
        if ((pi.y > p.y) != (pj.y > p.y)) {
            const double xint = pj.x + (p.y - pj.y) / (pi.y - pj.y) * (pi.x - pj.x);
            if (p.x < xint) inside = !inside;
        }
    }
    return inside;
}

// 0 when the point is inside; boundary distance otherwise.
inline double point_polygon_distance(Vec2 p, const Polygon& poly) {
    if (point_in_polygon(p, poly)) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < poly.size(); ++i)
        best = std::min(best, point_segment_distance(p, {poly[i], poly[(i + 1) % poly.size()]}));
    return best;
}

inline double polygon_boundary_distance(const Polygon& a, const Polygon& b) {
    // Zero if they overlap or touch.
    for (Vec2 p : a)
        if (point_in_polygon(p, b)) return 0.0;
    for (Vec2 p : b)
        if (point_in_polygon(p, a)) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.size(); ++i) {
        Segment sa{a[i], a[(i + 1) % a.size()]};
        for (std::size_t j = 0; j < b.size(); ++j) {
            Segment sb{b[j], b[(j + 1) % b.size()]};
            best = std::min({best, point_segment_distance(sa.a, sb),
                             point_segment_distance(sa.b, sb),
                             point_segment_distance(sb.a, sa),
                             point_segment_distance(sb.b, sa)});
            // Crossing segments.
            const Vec2 r = sa.b - sa.a, s = sb.b - sb.a;
            const double den = cross(r, s);
            if (den != 0.0) {
                const double t = cross(sb.a - sa.a, s) / den;
                const double u = cross(sb.a - sa.a, r) / den;
                if (t >= 0 && t <= 1 && u >= 0 && u <= 1) return 0.0;
            }
        }
    }
    return best;
}

inline double polygon_diameter(const Polygon& poly) {
    double best = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i)
        for (std::size_t j = i + 1; j < poly.size(); ++j)
            best = std::max(best, dist(poly[i], poly[j]));
    return best;
}

inline double polygon_circumradius(const Polygon& poly, Vec2 about) {
    double best = 0.0;
    for (Vec2 p : poly) best = std::max(best, dist(p, about));
    return best;
}

// Area of polygon ∩ closed disk of radius r at `center`. Exact closed form:
// every directed edge contributes a triangle for its inside part and circular
// sectors for the outside parts.
inline double polygon_disk_intersection_area(const Polygon& poly, Vec2 center, double r) {
    const auto sector = [&](Vec2 p, Vec2 q) {
        return 0.5 * r * r * std::atan2(cross(p, q), dot(p, q));
    };
    const auto triangle = [](Vec2 p, Vec2 q) { return 0.5 * cross(p, q); };

    double total = 0.0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        Vec2 a = poly[i] - center;
        Vec2 b = poly[(i + 1) % n] - center;
        const bool a_in = norm2(a) <= r * r;
        const bool b_in = norm2(b) <= r * r;
        if (a_in && b_in) {
            total += triangle(a, b);
            continue;
        }
        // Solve |a + t (b-a)|^2 = r^2 over t in [0, 1].
        const Vec2 d = b - a;
        const double aa = norm2(d);
        const double bb = 2.0 * dot(a, d);
        const double cc = norm2(a) - r * r;
        const double disc = bb * bb - 4.0 * aa * cc;
        double t0 = 1.0, t1 = 0.0;
        if (disc > 0.0 && aa > 0.0) {
            const double root = std::sqrt(disc);
            t0 = std::clamp((-bb - root) / (2.0 * aa), 0.0, 1.0);
            t1 = std::clamp((-bb + root) / (2.0 * aa), 0.0, 1.0);
        }
        if (t1 > t0) {
            const Vec2 p = a + t0 * d;
            const Vec2 q = a + t1 * d;
            total += sector(a, p) + triangle(p, q) + sector(q, b);
        } else {
            total += sector(a, b);
        }
    }
    return std::abs(total);
}

// Sutherland–Hodgman clip of `subject` against a convex CCW `clip` polygon.
inline Polygon clip_polygon_convex(const Polygon& subject, const Polygon& clip) {
    Polygon out = subject;
    for (std::size_t i = 0; i < clip.size() && !out.empty(); ++i) {
        const Vec2 e0 = clip[i];
        const Vec2 e1 = clip[(i + 1) % clip.size()];
        const Vec2 edge = e1 - e0;
        Polygon in;
        in.swap(out);
        for (std::size_t j = 0; j < in.size(); ++j) {
            const Vec2 cur = in[j];
            const Vec2 nxt = in[(j + 1) % in.size()];
            const double dc = cross(edge, cur - e0);
            const double dn = cross(edge, nxt - e0);
            if (dc >= 0.0) out.push_back(cur);
            if ((dc >= 0.0) != (dn >= 0.0)) {
                const double t = dc / (dc - dn);
                out.push_back(cur + t * (nxt - cur));
            }
        }
    }
    return out;
}

inline double polygon_overlap_area(const Polygon& a, const Polygon& b) {
    Polygon bb = b;
    if (polygon_signed_area(bb) < 0.0) std::reverse(bb.begin(), bb.end());
    Polygon inter = clip_polygon_convex(a, bb);
    if (inter.size() < 3) return 0.0;
    return polygon_area(inter);
}

// Point-set equality for placed polygons: same size and some cyclic offset
// aligns every vertex within tol (orientation must agree; both CCW here).
inline bool polygon_equal(const Polygon& a, const Polygon& b, double tol) {
    if (a.size() != b.size()) return false;
    const std::size_t n = a.size();
    for (std::size_t off = 0; off < n; ++off) {
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i)
            ok = dist(a[i], b[(i + off) % n]) <= tol;
        if (ok) return true;
    }
    return false;
}

// Direct isometries g with g(a) == b as point sets, found by matching vertex
// cycles. Several arise when the polygon has rotational symmetry.
inline std::vector<Isometry2> congruence_maps(const Polygon& a, const Polygon& b,
                                              double tol = 1e-9) {
    std::vector<Isometry2> maps;
    if (a.size() != b.size() || a.size() < 2) return maps;
    const std::size_t n = a.size();
    for (std::size_t off = 0; off < n; ++off) {
        // Candidate rotation from the first edge pair.
        const Vec2 ea = a[1] - a[0];
        const Vec2 eb = b[(1 + off) % n] - b[off];
        const double la = norm(ea), lb = norm(eb);
        if (std::abs(la - lb) > tol || la == 0.0) continue;
        const double theta = std::atan2(cross(ea, eb), dot(ea, eb));
        const Mat2 rot = Mat2::rotation(theta);
        const Isometry2 g{rot, b[off] - rot * a[0]};
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i)
            ok = dist(g(a[i]), b[(i + off) % n]) <= std::max(tol, 1e-9);
        if (ok) maps.push_back(g);
    }
    return maps;
}

}  // namespace tilerec
