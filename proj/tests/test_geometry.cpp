#include <catch2/catch.hpp>

#include <random>

#include "tilerec/geometry.hpp"

using namespace tilerec;

namespace {

// Independent oracle: largest singular value by scanning unit directions.
double opnorm_brute(const Mat2& m, int steps = 3600) {
    double best = 0.0;
    for (int i = 0; i < steps; ++i) {
        const double t = 2.0 * kPi * i / steps;
        best = std::max(best, norm(m * Vec2{std::cos(t), std::sin(t)}));
    }
    return best;
}

// Independent oracle: directed Hausdorff by very dense sampling.
double hausdorff_brute(const SegmentSet& a, const SegmentSet& b, double pitch = 1e-4) {
    auto directed = [&](const SegmentSet& from, const SegmentSet& to) {
        double worst = 0.0;
        for (const Segment& s : from) {
            const double len = dist(s.a, s.b);
            const int n = std::max(1, static_cast<int>(std::ceil(len / pitch)));
            for (int i = 0; i <= n; ++i) {
                const Vec2 p = s.a + (static_cast<double>(i) / n) * (s.b - s.a);
                double best = std::numeric_limits<double>::infinity();
                for (const Segment& t : to) best = std::min(best, point_segment_distance(p, t));
                worst = std::max(worst, best);
            }
        }
        return worst;
    };
    return std::max(directed(a, b), directed(b, a));
}

}  // namespace

TEST_CASE("operator norm closed form matches direction scan") {
    REQUIRE(operator_norm(Mat2::rotation(kPi / 2) - Mat2::identity()) ==
            Approx(std::sqrt(2.0)).epsilon(1e-12));
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 50; ++i) {
        Mat2 m{u(rng), u(rng), u(rng), u(rng)};
        REQUIRE(operator_norm(m) == Approx(opnorm_brute(m)).margin(1e-5));
    }
}

TEST_CASE("isometry distance basics") {
    REQUIRE(isometry_distance(Isometry2::identity(), Isometry2::identity()) == 0.0);
    REQUIRE(isometry_distance(Isometry2::identity(), Isometry2::translate({0.3, 0.4})) ==
            Approx(0.5));
    REQUIRE(isometry_distance(Isometry2::rotate(kPi / 2), Isometry2::identity()) ==
            Approx(std::sqrt(2.0)));
}

TEST_CASE("isometry distance is a metric on sampled isometries") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> ang(-kPi, kPi);
    std::uniform_real_distribution<double> off(-5.0, 5.0);
    auto sample = [&] {
        Isometry2 t = Isometry2::rotate(ang(rng));
        t.translation = {off(rng), off(rng)};
        return t;
    };
    for (int i = 0; i < 1000; ++i) {
        const Isometry2 a = sample(), b = sample(), c = sample();
        const double ab = isometry_distance(a, b);
        const double ba = isometry_distance(b, a);
        const double ac = isometry_distance(a, c);
        const double cb = isometry_distance(c, b);
        REQUIRE(ab >= 0.0);
        REQUIRE(ab == ba);
        REQUIRE(ab <= ac + cb + 1e-12);
    }
}

TEST_CASE("epsilon ball membership is strict") {
    REQUIRE(in_epsilon_ball(Isometry2::identity(), 1e-9));
    REQUIRE_FALSE(in_epsilon_ball(Isometry2::translate({0.25, 0}), 0.25));
    const Isometry2 t = Isometry2::rotate(0.01).compose(Isometry2::translate({0.001, 0}));
    REQUIRE(in_epsilon_ball(t, 0.05));
}

TEST_CASE("apply_isometry composition and examples") {
    const Segment s{{0, 0}, {0, 1}};
    const Segment moved = apply_isometry(Isometry2::translate({1, 0}), s);
    REQUIRE(moved.a.x == Approx(1.0));
    REQUIRE(moved.b.y == Approx(1.0));
    const Vec2 p = apply_isometry(Isometry2::rotate(kPi / 2), Vec2{1, 0});
    REQUIRE(p.x == Approx(0.0).margin(1e-15));
    REQUIRE(p.y == Approx(1.0));

    const Isometry2 t1 = Isometry2::rotate(0.3).compose(Isometry2::translate({1, 2}));
    const Isometry2 t2 = Isometry2::rotate(-1.1).compose(Isometry2::translate({-3, 0.5}));
    const Vec2 q{0.7, -0.2};
    const Vec2 twice = t1(t2(q));
    const Vec2 once = t1.compose(t2)(q);
    REQUIRE(dist(twice, once) < 1e-12);
    const Vec2 back = t1.inverse()(t1(q));
    REQUIRE(dist(back, q) < 1e-12);
}

TEST_CASE("clip_to_disk examples") {
    SegmentSet chord = clip_to_disk({{{-2, 0}, {2, 0}}}, 1.0);
    REQUIRE(chord.size() == 1);
    REQUIRE(chord[0].a.x == Approx(-1.0));
    REQUIRE(chord[0].b.x == Approx(1.0));

    REQUIRE(clip_to_disk({{{5, 5}, {6, 6}}}, 1.0).empty());

    SegmentSet cut = clip_to_disk({{{0, 0}, {3, 0}}}, 2.0);
    REQUIRE(cut.size() == 1);
    REQUIRE(cut[0].a.x == Approx(0.0));
    REQUIRE(cut[0].b.x == Approx(2.0));
}

TEST_CASE("clip_to_disk keeps points inside and is identity on inside sets") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    SegmentSet set;
    for (int i = 0; i < 60; ++i) set.push_back({{u(rng), u(rng)}, {u(rng), u(rng)}});
    const double n = 2.0;
    for (const Segment& s : clip_to_disk(set, n)) {
        REQUIRE(norm(s.a) <= n + 1e-9);
        REQUIRE(norm(s.b) <= n + 1e-9);
    }
    SegmentSet inside{{{0.1, 0.2}, {0.5, -0.3}}, {{-0.4, 0}, {0, 0.4}}};
    SegmentSet clipped = clip_to_disk(inside, 1.0);
    REQUIRE(clipped.size() == inside.size());
    for (std::size_t i = 0; i < inside.size(); ++i) {
        REQUIRE(dist(clipped[i].a, inside[i].a) < 1e-12);
        REQUIRE(dist(clipped[i].b, inside[i].b) < 1e-12);
    }
}

TEST_CASE("hausdorff distance examples") {
    SegmentSet s{{{0, 0}, {1, 0}}, {{1, 0}, {1, 1}}};
    auto same = hausdorff_distance(s, s, 0.05);
    REQUIRE(same.value == 0.0);
    REQUIRE(same.error_bound == 0.05);

    SegmentSet a{{{0, 0}, {1, 0}}};
    SegmentSet b{{{0, 1}, {1, 1}}};
    auto parallel = hausdorff_distance(a, b, 0.01);
    REQUIRE(parallel.value == Approx(1.0).margin(0.011));

    SegmentSet c{{{0, 0}, {0, 1}}};
    auto perp = hausdorff_distance(a, c, 0.01);
    REQUIRE(perp.value == Approx(1.0).margin(0.011));
    // Frozen from the dense oracle: the exact distance is 1 (corner to corner).
    REQUIRE(hausdorff_brute(a, c) == Approx(1.0).margin(1e-3));
}

TEST_CASE("hausdorff is symmetric and tracks the dense oracle") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 8; ++trial) {
        SegmentSet a, b;
        for (int i = 0; i < 5; ++i) a.push_back({{u(rng), u(rng)}, {u(rng), u(rng)}});
        for (int i = 0; i < 5; ++i) b.push_back({{u(rng), u(rng)}, {u(rng), u(rng)}});
        const double delta = 0.01;
        auto ab = hausdorff_distance(a, b, delta);
        auto ba = hausdorff_distance(b, a, delta);
        REQUIRE(ab.value == ba.value);
        REQUIRE(std::abs(ab.value - hausdorff_brute(a, b)) <= delta);
    }
    REQUIRE_THROWS_AS(hausdorff_distance({}, {{{0, 0}, {1, 0}}}, 0.1), empty_input);
}

TEST_CASE("polygon disk intersection area closed form") {
    const Polygon unit_square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    REQUIRE(polygon_disk_intersection_area(unit_square, {0, 0}, 1.0) ==
            Approx(kPi / 4).epsilon(1e-12));
    REQUIRE(polygon_disk_intersection_area(unit_square, {0.5, 0.5}, 3.0) == Approx(1.0));
    REQUIRE(polygon_disk_intersection_area(unit_square, {10, 10}, 1.0) == Approx(0.0).margin(1e-15));
    const Polygon half{{0, -2}, {2, -2}, {2, 2}, {0, 2}};
    REQUIRE(polygon_disk_intersection_area(half, {0, 0}, 1.0) == Approx(kPi / 2).epsilon(1e-12));

    // Monte Carlo oracle on an awkward offset case.
    const Polygon tri{{-0.3, -0.1}, {1.4, 0.2}, {0.1, 1.3}};
    const Vec2 c{0.4, 0.3};
    const double r = 0.7;
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> ux(-0.5, 1.5), uy(-0.3, 1.5);
    const double box = 2.0 * 1.8;
    int hits = 0;
    const int n = 400000;
    for (int i = 0; i < n; ++i) {
        const Vec2 p{ux(rng), uy(rng)};
        if (point_in_polygon(p, tri) && dist(p, c) <= r) ++hits;
    }
    const double mc = box * hits / n;
    REQUIRE(polygon_disk_intersection_area(tri, c, r) == Approx(mc).margin(0.01));
}

TEST_CASE("convex polygon overlap area") {
    const Polygon a{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    const Polygon b{{0.5, 0}, {1.5, 0}, {1.5, 1}, {0.5, 1}};
    REQUIRE(polygon_overlap_area(a, b) == Approx(0.5));
    const Polygon c{{3, 3}, {4, 3}, {4, 4}, {3, 4}};
    REQUIRE(polygon_overlap_area(a, c) == Approx(0.0).margin(1e-15));
    REQUIRE(polygon_overlap_area(a, a) == Approx(1.0));
}

TEST_CASE("congruence maps find all alignments") {
    const Polygon tri{{0, 0}, {2, 0}, {0, 1}};
    const Isometry2 g = Isometry2::rotate(0.7).compose(Isometry2::translate({3, -1}));
    const Polygon moved = apply_isometry(g, tri);
    auto maps = congruence_maps(tri, moved, 1e-9);
    REQUIRE(maps.size() == 1);  // scalene: unique direct alignment
    for (std::size_t i = 0; i < tri.size(); ++i)
        REQUIRE(dist(maps[0](tri[i]), moved[i]) < 1e-9);

    const Polygon sq{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    REQUIRE(congruence_maps(sq, sq, 1e-9).size() == 4);  // rotational symmetries

    const Polygon mirrored{{0, 0}, {0, -1}, {2, 0}};  // reflected shape, CCW order
    REQUIRE(congruence_maps(tri, apply_isometry(Isometry2::rotate(0.2), mirrored), 1e-9).empty());
}
