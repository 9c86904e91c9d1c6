#pragma once

// JSON serialization for windows, certificates, metric results, FLC reports
// and run configuration. Field names and layouts are part of the CLI
// contract; floats are rounded to 12 significant digits before emission so
// output files are byte-stable.

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "tilerec/complexity.hpp"
#include "tilerec/generators.hpp"
#include "tilerec/ipsets.hpp"
#include "tilerec/metrics.hpp"
#include "tilerec/recurrence.hpp"
#include "tilerec/tiling.hpp"

namespace tilerec {

using json = nlohmann::ordered_json;

struct bad_input : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline double round12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return std::strtod(buf, nullptr);
}

inline json vec_json(Vec2 v) { return json::array({round12(v.x), round12(v.y)}); }

inline Vec2 vec_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) throw bad_input("expected [x, y] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

// ---- tiling window ----

inline json window_to_json(const TilingWindow& w) {
    json protos = json::array();
    for (const Prototile& p : w.prototiles().items()) {
        json verts = json::array();
        for (Vec2 v : p.polygon) verts.push_back(vec_json(v));
        protos.push_back({{"id", p.id}, {"vertices", verts}});
    }
    json tiles = json::array();
    for (const PlacedTile& t : w.tiles()) {
        tiles.push_back({{"proto", w.prototiles()[t.proto].id},
                         {"rotation", round12(t.placement.angle())},
                         {"translation", vec_json(t.placement.translation)}});
    }
    return {{"prototiles", protos}, {"tiles", tiles}, {"radius", round12(w.radius())}};
}

inline TilingWindow window_from_json(const json& j) {
    if (!j.contains("prototiles") || !j.contains("tiles") || !j.contains("radius"))
        throw bad_input("window: missing prototiles/tiles/radius");
    std::vector<Prototile> protos;
    for (const json& p : j.at("prototiles")) {
        Prototile proto;
        proto.id = p.at("id").get<std::string>();
        for (const json& v : p.at("vertices")) proto.polygon.push_back(vec_from_json(v));
        if (proto.polygon.size() < 3 || polygon_signed_area(proto.polygon) <= 0.0)
            throw bad_input("window: prototile " + proto.id + " is not a CCW simple polygon");
        protos.push_back(std::move(proto));
    }
    auto table = std::make_shared<PrototileTable>(std::move(protos));
    std::vector<PlacedTile> tiles;
    for (const json& t : j.at("tiles")) {
        const std::string id = t.at("proto").get<std::string>();
        auto idx = table->index_of(id);
        if (!idx) throw bad_input("window: tile references unknown prototile " + id);
        const double theta = t.at("rotation").get<double>();
        tiles.push_back({*idx, Isometry2{Mat2::rotation(theta),
                                         vec_from_json(t.at("translation"))}});
    }
    return TilingWindow(j.at("radius").get<double>(), table, std::move(tiles));
}

// ---- certificates ----

inline json isometry_json(const Isometry2& s) {
    return {{"rotation", round12(s.angle())}, {"translation", vec_json(s.translation)}};
}

inline Isometry2 isometry_from_json(const json& j) {
    return {Mat2::rotation(j.at("rotation").get<double>()),
            vec_from_json(j.at("translation"))};
}

inline json certificate_to_json(const WitnessCertificate& cert, const PatternF& f) {
    json patch = json::array();
    for (const PlacedTile& t : cert.patch.tiles) {
        patch.push_back({{"proto", (*cert.patch.table)[t.proto].id},
                         {"rotation", round12(t.placement.angle())},
                         {"translation", vec_json(t.placement.translation)}});
    }
    json corrections = json::array();
    for (std::size_t i = 0; i < f.vectors.size(); ++i) {
        json entry{{"u", vec_json(f.vectors[i])}};
        if (cert.variant == TheoremVariant::thm1)
            entry["c"] = vec_json(cert.corrections[i].translation);
        else if (cert.variant == TheoremVariant::thm2)
            entry["s"] = isometry_json(cert.corrections[i]);
        else {
            json per_tile = json::array();
            for (const Isometry2& s : cert.per_tile[i]) per_tile.push_back(isometry_json(s));
            entry["tiles"] = per_tile;
        }
        corrections.push_back(std::move(entry));
    }
    return {{"variant", to_string(cert.variant)},
            {"n", cert.n},
            {"epsilon", round12(cert.epsilon)},
            {"base", vec_json(cert.base)},
            {"patch", patch},
            {"corrections", corrections}};
}

struct CertificateFile {
    WitnessCertificate certificate;
    PatternF pattern;
};

inline CertificateFile certificate_from_json(const json& j, const PrototileTablePtr& table) {
    CertificateFile out;
    WitnessCertificate& cert = out.certificate;
    const std::string variant = j.at("variant").get<std::string>();
    if (variant == "thm1")
        cert.variant = TheoremVariant::thm1;
    else if (variant == "thm2")
        cert.variant = TheoremVariant::thm2;
    else if (variant == "thm3")
        cert.variant = TheoremVariant::thm3;
    else
        throw bad_input("certificate: unknown variant " + variant);
    cert.n = j.at("n").get<std::uint64_t>();
    cert.epsilon = j.at("epsilon").get<double>();
    cert.base = vec_from_json(j.at("base"));
    cert.patch.table = table;
    for (const json& t : j.at("patch")) {
        const std::string id = t.at("proto").get<std::string>();
        auto idx = table->index_of(id);
        if (!idx) throw bad_input("certificate: patch references unknown prototile " + id);
        cert.patch.tiles.push_back({*idx, Isometry2{Mat2::rotation(t.at("rotation").get<double>()),
                                                    vec_from_json(t.at("translation"))}});
    }
    for (const json& c : j.at("corrections")) {
        out.pattern.vectors.push_back(vec_from_json(c.at("u")));
        if (cert.variant == TheoremVariant::thm1) {
            cert.corrections.push_back(Isometry2::translate(vec_from_json(c.at("c"))));
        } else if (cert.variant == TheoremVariant::thm2) {
            cert.corrections.push_back(isometry_from_json(c.at("s")));
        } else {
            std::vector<Isometry2> per_tile;
            for (const json& s : c.at("tiles")) per_tile.push_back(isometry_from_json(s));
            cert.per_tile.push_back(std::move(per_tile));
        }
    }
    return out;
}

// ---- metric / flc reports ----

inline json metric_to_json(const MetricResult& m) {
    return {{"lower", round12(m.lower)},
            {"upper", round12(m.upper)},
            {"truncation_radius", round12(m.truncation_radius)},
            {"notes", m.notes}};
}

inline json census_to_json(const T2Census& c) {
    json classes = json::array();
    for (const auto& entry : c.classes) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "0x%016llx",
                      static_cast<unsigned long long>(entry.proto.hash));
        classes.push_back({{"hash", buf}, {"count", entry.count}});
    }
    return {{"mode", c.mode == PatchMode::translation ? "translation" : "isometry"},
            {"window_radius", round12(c.window_radius)},
            {"class_count", c.class_count()},
            {"classes", classes}};
}

inline json flc_report_to_json(const FLCReport& r) {
    json censuses = json::array();
    for (std::size_t i = 0; i < r.translation_censuses.size(); ++i) {
        censuses.push_back(census_to_json(r.translation_censuses[i]));
        censuses.push_back(census_to_json(r.isometry_censuses[i]));
    }
    return {{"verdict", to_string(r.verdict)}, {"censuses", censuses}};
}

// ---- generator / ip / run configuration ----

inline json generator_spec_to_json(const GeneratorSpec& spec) {
    json params = json::object();
    if (spec.kind == "lattice")
        params["basis"] = json::array({vec_json(spec.basis1), vec_json(spec.basis2)});
    else if (spec.kind == "shear")
        params["rule"] = spec.shear_rule;
    return {{"kind", spec.kind}, {"params", params}, {"seed", spec.seed}};
}

inline GeneratorSpec generator_spec_from_json(const json& j) {
    GeneratorSpec spec;
    spec.kind = j.at("kind").get<std::string>();
    if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
    const json params = j.value("params", json::object());
    if (spec.kind == "lattice" && params.contains("basis")) {
        spec.basis1 = vec_from_json(params.at("basis").at(0));
        spec.basis2 = vec_from_json(params.at("basis").at(1));
    }
    if (spec.kind == "shear") spec.shear_rule = params.value("rule", "golden");
    if (spec.kind != "lattice" && spec.kind != "shear" && spec.kind != "penrose" &&
        spec.kind != "pinwheel")
        throw bad_input("unknown generator kind: " + spec.kind);
    return spec;
}

inline json ip_spec_to_json(const IPSetSpec& spec) {
    json params = json::object();
    if (spec.kind == "geometric") params["base"] = spec.base;
    if (spec.kind == "arithmetic") {
        params["start"] = spec.start;
        params["step"] = spec.step;
    }
    if (spec.kind == "explicit") params["values"] = spec.values;
    return {{"kind", spec.kind}, {"params", params}};
}

inline IPSetSpec ip_spec_from_json(const json& j) {
    IPSetSpec spec;
    spec.kind = j.at("kind").get<std::string>();
    const json params = j.value("params", json::object());
    if (spec.kind == "geometric")
        spec.base = params.value("base", 2ull);
    else if (spec.kind == "arithmetic") {
        spec.start = params.value("start", 1ull);
        spec.step = params.value("step", 1ull);
    } else if (spec.kind == "explicit")
        spec.values = params.value("values", std::vector<std::uint64_t>{});
    else
        throw bad_input("unknown ip set kind: " + spec.kind);
    return spec;
}

// ---- files ----

inline json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw bad_input("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw bad_input(path + ": " + e.what());
    }
    return j;
}

inline void save_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw bad_input("cannot write " + path);
    out << j.dump(2) << "\n";
}

inline void save_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw bad_input("cannot write " + path);
    out << text;
}

}  // namespace tilerec
