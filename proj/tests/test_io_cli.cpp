#include <catch2/catch.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "tilerec/io.hpp"
#include "tilerec/svg.hpp"

using namespace tilerec;

namespace {

const std::string kCli = TILEREC_CLI_PATH;

std::string tmp_dir() {
    static std::string dir = [] {
        std::string d = "/tmp/tilerec_test_XXXXXX";
        REQUIRE(mkdtemp(d.data()) != nullptr);
        return d;
    }();
    return dir;
}

int run(const std::string& args) {
    const std::string cmd = kCli + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

std::size_t count_occurrences(const std::string& text, const std::string& needle) {
    std::size_t count = 0;
    for (std::size_t pos = text.find(needle); pos != std::string::npos;
         pos = text.find(needle, pos + needle.size()))
        ++count;
    return count;
}

std::size_t lattice_count_oracle(double r) {
    std::size_t count = 0;
    const long m = static_cast<long>(std::ceil(r)) + 2;
    for (long i = -m; i <= m; ++i)
        for (long j = -m; j <= m; ++j) {
            const double dx = std::max({static_cast<double>(i), 0.0, -static_cast<double>(i + 1)});
            const double dy = std::max({static_cast<double>(j), 0.0, -static_cast<double>(j + 1)});
            if (std::hypot(dx, dy) <= r) ++count;
        }
    return count;
}

}  // namespace

TEST_CASE("window json round trip preserves geometry") {
    auto pen = penrose(6.0);
    auto w = pen->window(4.0);
    const json j = window_to_json(*w);
    TilingWindow back = window_from_json(j);
    REQUIRE(back.radius() == w->radius());
    REQUIRE(back.tiles().size() == w->tiles().size());
    for (std::size_t i = 0; i < w->tiles().size(); ++i)
        REQUIRE(polygon_equal(back.tile_polygon(i), w->tile_polygon(i), 1e-8));
    // Serialization is stable.
    REQUIRE(window_to_json(back).dump() == j.dump());
}

TEST_CASE("certificate json round trip") {
    auto lat = square_lattice(Vec2{1, 0}, Vec2{0, 1}, 18.0);
    PatternF f{{{1, 0}, {0, 1}}};
    auto cert = search_witness(lat, f, 0.15, TheoremVariant::thm1, 4, 18.0);
    REQUIRE(cert.has_value());
    const json j = certificate_to_json(*cert, f);
    auto table = lat->prototile_table();
    CertificateFile back = certificate_from_json(j, table);
    REQUIRE(back.certificate.n == cert->n);
    REQUIRE(back.certificate.patch.size() == cert->patch.size());
    REQUIRE(back.pattern.vectors.size() == f.vectors.size());
    REQUIRE(verify_witness_thm1(lat, back.pattern, back.certificate));
}

TEST_CASE("generator and ip spec json round trips") {
    GeneratorSpec spec;
    spec.kind = "shear";
    spec.shear_rule = "seeded";
    spec.seed = 77;
    GeneratorSpec back = generator_spec_from_json(generator_spec_to_json(spec));
    REQUIRE(back.kind == "shear");
    REQUIRE(back.shear_rule == "seeded");
    REQUIRE(back.seed == 77);
    REQUIRE_THROWS_AS(generator_spec_from_json(json{{"kind", "weird"}}), bad_input);

    IPSetSpec ip;
    ip.kind = "geometric";
    ip.base = 3;
    IPSetSpec ip_back = ip_spec_from_json(ip_spec_to_json(ip));
    REQUIRE(ip_back.base == 3);
}

TEST_CASE("svg rendering counts polygons and overlays") {
    auto lat = square_lattice(Vec2{1, 0}, Vec2{0, 1}, 18.0);
    auto w = lat->window(3.0);
    const std::string svg = render_svg(*w);
    REQUIRE(count_occurrences(svg, "<polygon") == w->tiles().size());
    REQUIRE(render_svg(*w) == svg);  // deterministic

    PatternF f{{{1, 0}, {0, 1}}};
    auto cert = search_witness(lat, f, 0.15, TheoremVariant::thm1, 4, 18.0);
    REQUIRE(cert.has_value());
    auto big = lat->window(12.0);
    const std::string overlay = render_svg(*big, &*cert, &f);
    REQUIRE(count_occurrences(overlay, "patch-outline") == f.vectors.size() + 1);
}

TEST_CASE("cli gen writes deterministic windows") {
    const std::string dir = tmp_dir();
    write_file(dir + "/lattice.json", R"({"generator": {"kind": "lattice"}})");
    REQUIRE(run("gen --config " + dir + "/lattice.json --radius 10 --out " + dir + "/w10.json") ==
            0);
    const json w = load_json(dir + "/w10.json");
    REQUIRE(w.at("tiles").size() == lattice_count_oracle(10.0));

    REQUIRE(run("gen --config " + dir + "/lattice.json --radius 10 --out " + dir +
                "/w10b.json") == 0);
    REQUIRE(slurp(dir + "/w10.json") == slurp(dir + "/w10b.json"));

    write_file(dir + "/bad.json", R"({"generator": {"kind": "dodecahedral"}})");
    REQUIRE(run("gen --config " + dir + "/bad.json --radius 5 --out " + dir + "/nope.json") == 1);
    REQUIRE(run("gen --config " + dir + "/missing.json --radius 5 --out " + dir + "/nope.json") ==
            1);
}

TEST_CASE("cli search, verify and render round trip") {
    const std::string dir = tmp_dir();
    write_file(dir + "/search.json", R"({
      "generator": {"kind": "lattice"},
      "search": {"pattern": [[1,0],[0,1],[1,1]], "epsilon": 0.1, "variant": "thm1",
                 "n_budget": 10, "r_search": 18}
    })");
    REQUIRE(run("search --config " + dir + "/search.json --out " + dir + "/cert.json") == 0);
    const json cert = load_json(dir + "/cert.json");
    REQUIRE(cert.at("variant") == "thm1");
    REQUIRE(cert.at("n") == 1);

    write_file(dir + "/lattice.json", R"({"generator": {"kind": "lattice"}})");
    REQUIRE(run("gen --config " + dir + "/lattice.json --radius 19 --out " + dir +
                "/w19.json") == 0);
    REQUIRE(run("verify " + dir + "/w19.json " + dir + "/cert.json") == 0);

    // Corrupt a correction: verification fails with exit 2.
    json broken = cert;
    broken["corrections"][0]["c"] = json::array({0.5, 0.0});
    save_json(dir + "/broken.json", broken);
    REQUIRE(run("verify " + dir + "/w19.json " + dir + "/broken.json") == 2);

    REQUIRE(run("verify " + dir + "/w19.json " + dir + "/not_there.json") == 1);

    // A window too small to hold the translated copies is an input error,
    // not a verification failure.
    REQUIRE(run("gen --config " + dir + "/lattice.json --radius 6 --out " + dir +
                "/w6.json") == 0);
    REQUIRE(run("verify " + dir + "/w6.json " + dir + "/cert.json") == 1);

    REQUIRE(run("render " + dir + "/w19.json " + dir + "/cert.json --out " + dir +
                "/tiling.svg") == 0);
    const std::string svg = slurp(dir + "/tiling.svg");
    REQUIRE(count_occurrences(svg, "patch-outline") == 4);  // base + three copies

    // Budget zero exhausts immediately: exit 3.
    write_file(dir + "/zero.json", R"({
      "generator": {"kind": "lattice"},
      "search": {"pattern": [[1,0]], "epsilon": 0.1, "variant": "thm1",
                 "n_budget": 0, "r_search": 18}
    })");
    REQUIRE(run("search --config " + dir + "/zero.json --out " + dir + "/none.json") == 3);
}

TEST_CASE("cli metric evaluates window files") {
    const std::string dir = tmp_dir();
    write_file(dir + "/lattice.json", R"({"generator": {"kind": "lattice"}})");
    write_file(dir + "/penrose.json", R"({"generator": {"kind": "penrose"}})");
    REQUIRE(run("gen --config " + dir + "/lattice.json --radius 12 --out " + dir +
                "/la.json") == 0);
    REQUIRE(run("gen --config " + dir + "/penrose.json --radius 12 --out " + dir +
                "/pe.json") == 0);

    const std::string out = dir + "/metric_out.json";
    const std::string cmd = kCli + " metric --metric d2 " + dir + "/la.json " + dir +
                            "/pe.json > " + out + " 2>/dev/null";
    REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    const json m = load_json(out);
    REQUIRE(m.at("upper").get<double>() == Approx(kMetricCap).margin(1e-6));

    for (const std::string which : {"d", "d1", "d3"}) {
        const std::string cmd_same = kCli + " metric --metric " + which + " " + dir +
                                     "/la.json " + dir + "/la.json > " + dir +
                                     "/m2.json 2>/dev/null";
        REQUIRE(WEXITSTATUS(std::system(cmd_same.c_str())) == 0);
        REQUIRE(load_json(dir + "/m2.json").at("lower").get<double>() == 0.0);
    }

    // A window translated by 0.05 in the file is at d1 distance about 0.05.
    // The windows must be large enough that the auto-adapted r_min resolves
    // levels below the shift.
    REQUIRE(run("gen --config " + dir + "/lattice.json --radius 26 --out " + dir +
                "/la26.json") == 0);
    json shifted = load_json(dir + "/la26.json");
    for (json& t : shifted.at("tiles"))
        t["translation"][0] = t["translation"][0].get<double>() + 0.05;
    save_json(dir + "/la_shift.json", shifted);
    const std::string cmd_shift = kCli + " metric --metric d1 " + dir + "/la26.json " + dir +
                                  "/la_shift.json > " + dir + "/m3.json 2>/dev/null";
    REQUIRE(WEXITSTATUS(std::system(cmd_shift.c_str())) == 0);
    const double up = load_json(dir + "/m3.json").at("upper").get<double>();
    REQUIRE(up == Approx(0.05).margin(2e-3));

    REQUIRE(run("metric --metric d1 " + dir + "/la.json " + dir + "/missing.json") == 1);
    REQUIRE(run("metric --metric d9 " + dir + "/la.json " + dir + "/la.json") == 1);
}

TEST_CASE("cli flc classifies the lattice") {
    const std::string dir = tmp_dir();
    write_file(dir + "/flc.json", R"({
      "generator": {"kind": "lattice"},
      "flc": {"radii": [5, 8, 12]}
    })");
    REQUIRE(run("flc --config " + dir + "/flc.json --out " + dir + "/report.json") == 0);
    const json report = load_json(dir + "/report.json");
    REQUIRE(report.at("verdict") == "FLC-translation");
    REQUIRE(report.at("censuses").size() == 6);
}
