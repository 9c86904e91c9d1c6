#include <catch2/catch.hpp>

#include <random>

#include "tilerec/recurrence.hpp"

using namespace tilerec;

namespace {

WitnessCertificate lattice_identity_cert(const WindowProviderPtr& lat, const PatternF& f,
                                         double eps) {
    WitnessCertificate cert;
    cert.variant = TheoremVariant::thm1;
    cert.n = 1;
    cert.epsilon = eps;
    cert.base = {0, 0};
    cert.patch = patches_covering(*lat->window(1.0 / eps + 2.0), 1.0 / eps, {0, 0});
    cert.corrections.assign(f.vectors.size(), Isometry2::identity());
    return cert;
}

}  // namespace

TEST_CASE("verify thm1 on the periodic lattice") {
    auto lat = square_lattice();
    PatternF f{{{1, 0}, {0, 1}}};
    WitnessCertificate cert = lattice_identity_cert(lat, f, 0.1);
    REQUIRE(verify_witness_thm1(lat, f, cert));

    // Oversized correction violates the strict bound.
    WitnessCertificate bad = cert;
    bad.corrections[0] = Isometry2::translate({0.2, 0});
    REQUIRE_FALSE(verify_witness_thm1(lat, f, bad));

    // A correction must be a pure translation in thm1.
    WitnessCertificate rot = cert;
    rot.corrections[0] = Isometry2::rotate(0.05);
    REQUIRE_FALSE(verify_witness_thm1(lat, f, rot));

    // Support must actually cover the disk.
    WitnessCertificate thin = cert;
    thin.patch.tiles.resize(4);
    REQUIRE_FALSE(verify_witness_thm1(lat, f, thin));
}

TEST_CASE("verify thm2 reduces to thm1 with identity corrections") {
    auto lat = square_lattice();
    PatternF f{{{1, 0}, {0, 1}}};
    WitnessCertificate cert = lattice_identity_cert(lat, f, 0.1);
    cert.variant = TheoremVariant::thm2;
    REQUIRE(verify_witness_thm2(lat, f, cert));

    WitnessCertificate bad = cert;
    bad.corrections[1] = Isometry2::rotate(0.2);  // distance >= eps
    REQUIRE_FALSE(verify_witness_thm2(lat, f, bad));
}

TEST_CASE("verify thm3 with per-tile corrections") {
    auto lat = square_lattice();
    PatternF f{{{1, 0}}};
    WitnessCertificate cert = lattice_identity_cert(lat, f, 0.2);
    cert.variant = TheoremVariant::thm3;
    cert.corrections.clear();
    cert.per_tile.assign(1, std::vector<Isometry2>(cert.patch.size(), Isometry2::identity()));
    REQUIRE(verify_witness_thm3(lat, f, cert));

    WitnessCertificate bad = cert;
    bad.per_tile[0][3] = Isometry2::translate({0.25, 0});  // outside B_eps
    REQUIRE_FALSE(verify_witness_thm3(lat, f, bad));
}

TEST_CASE("search finds the periodic certificate and rounds trip") {
    auto lat = square_lattice(Vec2{1, 0}, Vec2{0, 1}, 18.0);
    PatternF f{{{1, 0}, {0, 1}, {1, 1}}};
    auto cert = search_witness(lat, f, 0.1, TheoremVariant::thm1, 10, 18.0);
    REQUIRE(cert.has_value());
    REQUIRE(cert->n == 1);
    for (const Isometry2& c : cert->corrections) REQUIRE(norm(c.translation) < 1e-9);
    REQUIRE(patch_support_contains_disk(cert->patch, 10.0, cert->base));
    REQUIRE(verify_witness_thm1(lat, f, *cert));

    // Determinism: a second run returns the identical certificate.
    auto again = search_witness(lat, f, 0.1, TheoremVariant::thm1, 10, 18.0);
    REQUIRE(again.has_value());
    REQUIRE(again->n == cert->n);
    REQUIRE(again->base.x == cert->base.x);
    REQUIRE(again->base.y == cert->base.y);

    // Thread cap must not change the outcome.
    SearchOptions threaded;
    threaded.threads = 4;
    auto parallel = search_witness(lat, f, 0.1, TheoremVariant::thm1, 10, 18.0, std::nullopt,
                                   threaded);
    REQUIRE(parallel.has_value());
    REQUIRE(parallel->base.x == cert->base.x);
    REQUIRE(parallel->base.y == cert->base.y);
}

TEST_CASE("search reports exhaustion and insufficient windows distinctly") {
    auto lat = square_lattice(Vec2{1, 0}, Vec2{0, 1}, 18.0);
    PatternF f{{{1, 0}}};
    REQUIRE_FALSE(search_witness(lat, f, 0.1, TheoremVariant::thm1, 0, 18.0).has_value());
    REQUIRE_THROWS_AS(search_witness(lat, f, 0.1, TheoremVariant::thm1, 5, 6.0),
                      insufficient_window);
}

TEST_CASE("relaxing epsilon keeps success") {
    auto lat = square_lattice(Vec2{1, 0}, Vec2{0, 1}, 20.0);
    PatternF f{{{1, 0}, {0, 1}}};
    auto tight = search_witness(lat, f, 0.1, TheoremVariant::thm1, 8, 20.0);
    REQUIRE(tight.has_value());
    auto loose = search_witness(lat, f, 0.2, TheoremVariant::thm1, 8, 20.0);
    REQUIRE(loose.has_value());
}

TEST_CASE("ip restriction steers the dilation factor") {
    auto lat = square_lattice(Vec2{1, 0}, Vec2{0, 1}, 26.0);
    PatternF f{{{1, 0}, {0, 1}, {1, 1}}};
    IPSetSpec base3;
    base3.kind = "geometric";
    base3.base = 3;
    auto cert = search_witness(lat, f, 0.1, TheoremVariant::thm1, 12, 26.0, base3);
    REQUIRE(cert.has_value());
    REQUIRE(ip_contains(base3, cert->n));
    REQUIRE(cert->n == 3);  // first admissible dilation
    REQUIRE(verify_witness_thm1(lat, f, *cert));
}

TEST_CASE("penrose search round trip at a coarse epsilon") {
    auto pen = penrose(60.0);
    PatternF f{{{1, 0}}};
    auto cert = search_witness(pen, f, 1.0, TheoremVariant::thm1, 40, 60.0);
    REQUIRE(cert.has_value());
    REQUIRE(verify_witness_thm1(pen, f, *cert));
    REQUIRE(norm(cert->corrections[0].translation) < 1.0);
}

TEST_CASE("certificate conversions verify under the weaker theorems") {
    auto lat = square_lattice(Vec2{1, 0}, Vec2{0, 1}, 18.0);
    PatternF f{{{1, 0}, {0, 1}}};
    auto cert = search_witness(lat, f, 0.12, TheoremVariant::thm1, 6, 18.0);
    REQUIRE(cert.has_value());

    WitnessCertificate as2 = certificate_as_thm2(*cert);
    REQUIRE(verify_witness_thm2(lat, f, as2));
    WitnessCertificate as3 = certificate_as_thm3(as2);
    REQUIRE(verify_witness_thm3(lat, f, as3));
}

TEST_CASE("patch index buckets periodic anchors together") {
    auto lat = square_lattice(Vec2{1, 0}, Vec2{0, 1}, 10.0);
    auto w = lat->window(10.0);
    REQUIRE_THROWS_AS(build_patch_index(*w, 0.5, 4.0, PatchMode::translation),
                      std::invalid_argument);

    PatchIndex index = build_patch_index(*w, 0.5, 1.5, PatchMode::translation);
    REQUIRE(index.anchor_count() > 0);
    // Anchors on the half-integer grid fall into four residue classes, so at
    // most four protopatch classes appear (frozen from a direct count).
    REQUIRE(index.bucket_count() <= 4);

    auto hash_at = [&](Vec2 anchor) {
        return canonicalize(patches_covering(*w, 1.5, anchor), PatchMode::translation).hash;
    };
    // Two anchors a lattice period apart share a bucket.
    REQUIRE(hash_at({0, 0}) == hash_at({1, 0}));
    REQUIRE(index.lookup(hash_at({0, 0})) != nullptr);
    // Distinct protopatches land in distinct buckets.
    REQUIRE(hash_at({0, 0}) != hash_at({0.5, 0}));

    // Every bucket collects its fair share of the anchors.
    const std::size_t floor_share = index.anchor_count() / 4 / 2;
    std::size_t checked = 0;
    for (std::uint64_t h : {hash_at({0, 0}), hash_at({0.5, 0}), hash_at({0, 0.5}),
                            hash_at({0.5, 0.5})}) {
        const auto* bucket = index.lookup(h);
        REQUIRE(bucket != nullptr);
        REQUIRE(bucket->size() >= floor_share);
        ++checked;
    }
    REQUIRE(checked == 4);
}

TEST_CASE("pattern validation rejects degenerate input") {
    PatternF empty;
    REQUIRE_THROWS_AS(empty.validate(), std::invalid_argument);
    PatternF dup{{{1, 0}, {1, 0}}};
    REQUIRE_THROWS_AS(dup.validate(), std::invalid_argument);
}
