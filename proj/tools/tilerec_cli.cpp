// tilerec: generate tiling windows, evaluate tiling metrics, classify finite
// local complexity, search for and verify scaled-pattern recurrence
// certificates, and render windows to SVG.
//
// Exit codes: 0 success, 1 input/config error, 2 verification failure,
// 3 search budget exhausted.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "tilerec/io.hpp"
#include "tilerec/svg.hpp"

namespace {

using namespace tilerec;

int log_level() {
    const char* env = std::getenv("TILEREC_LOG");
    if (!env) return 1;
    const std::string v = env;
    if (v == "error") return 0;
    if (v == "debug") return 2;
    return 1;
}

void log_info(const std::string& msg) {
    if (log_level() >= 1) std::cerr << "[tilerec] " << msg << "\n";
}

void log_debug(const std::string& msg) {
    if (log_level() >= 2) std::cerr << "[tilerec:debug] " << msg << "\n";
}

struct RunConfig {
    GeneratorSpec generator;
    double tau_geom = 1e-9;
    double tau_area = 1e-6;
    double quantum = 1e-6;
    double delta = 0.01;
    double r_min = 0.01;
    double grid_step = 1e-3;
    int metric_n = 20;
    std::vector<double> flc_radii{5.0, 10.0, 20.0};
    PatternF pattern{{{1, 0}, {0, 1}}};
    double epsilon = 0.1;
    TheoremVariant variant = TheoremVariant::thm1;
    std::uint64_t n_budget = 60;
    double r_search = 30.0;
    std::optional<IPSetSpec> ip;
    unsigned threads = 0;
};

RunConfig load_config(const std::string& path) {
    RunConfig cfg;
    if (path.empty()) return cfg;
    const json j = load_json(path);
    if (j.contains("generator")) cfg.generator = generator_spec_from_json(j.at("generator"));
    if (j.contains("tolerances")) {
        const json& t = j.at("tolerances");
        cfg.tau_geom = t.value("tau_geom", cfg.tau_geom);
        cfg.tau_area = t.value("tau_area", cfg.tau_area);
        cfg.quantum = t.value("quantum", cfg.quantum);
        cfg.delta = t.value("delta", cfg.delta);
    }
    if (j.contains("metric")) {
        const json& m = j.at("metric");
        cfg.r_min = m.value("r_min", cfg.r_min);
        cfg.grid_step = m.value("grid_step", cfg.grid_step);
        cfg.metric_n = m.value("N", cfg.metric_n);
    }
    if (j.contains("flc")) cfg.flc_radii = j.at("flc").value("radii", cfg.flc_radii);
    if (j.contains("search")) {
        const json& s = j.at("search");
        if (s.contains("pattern")) {
            cfg.pattern.vectors.clear();
            for (const json& u : s.at("pattern")) cfg.pattern.vectors.push_back(vec_from_json(u));
        }
        cfg.epsilon = s.value("epsilon", cfg.epsilon);
        if (s.contains("variant")) {
            const std::string v = s.at("variant").get<std::string>();
            if (v == "thm1") cfg.variant = TheoremVariant::thm1;
            else if (v == "thm2") cfg.variant = TheoremVariant::thm2;
            else if (v == "thm3") cfg.variant = TheoremVariant::thm3;
            else throw bad_input("unknown variant " + v);
        }
        cfg.n_budget = s.value("n_budget", cfg.n_budget);
        cfg.r_search = s.value("r_search", cfg.r_search);
        if (s.contains("ip") && !s.at("ip").is_null()) cfg.ip = ip_spec_from_json(s.at("ip"));
    }
    if (j.contains("threads")) cfg.threads = j.at("threads").get<unsigned>();
    return cfg;
}

TheoremVariant parse_variant(const std::string& v) {
    if (v == "thm1") return TheoremVariant::thm1;
    if (v == "thm2") return TheoremVariant::thm2;
    if (v == "thm3") return TheoremVariant::thm3;
    throw bad_input("unknown variant " + v);
}

int cmd_gen(const std::string& config_path, double radius, const std::string& out,
            std::optional<std::uint64_t> seed) {
    RunConfig cfg = load_config(config_path);
    if (seed) cfg.generator.seed = *seed;
    if (!(radius > 0.0)) throw bad_input("gen: --radius must be positive");
    cfg.generator.initial_radius = radius;
    auto provider = make_provider(cfg.generator);
    auto w = provider->window(radius);
    save_json(out, window_to_json(*w));
    log_info("wrote " + out + " (" + std::to_string(w->tiles().size()) + " tiles)");
    return 0;
}

int cmd_metric(const std::string& config_path, const std::string& which,
               const std::string& file_a, const std::string& file_b) {
    RunConfig cfg = load_config(config_path);
    auto wa = window_from_json(load_json(file_a));
    auto wb = window_from_json(load_json(file_b));
    auto pa = fixed_window_provider(std::move(wa));
    auto pb = fixed_window_provider(std::move(wb));

    MetricResult result;
    MetricOptions opts;
    opts.grid_step = cfg.grid_step;
    opts.threads = cfg.threads;
    opts.tol_geom = cfg.tau_geom;
    if (which == "d") {
        const double file_r = std::min(*pa->fixed_radius(), *pb->fixed_radius());
        const int n = std::min(cfg.metric_n, static_cast<int>(std::floor(file_r)));
        if (n < 1) throw bad_input("metric: windows too small for the general metric");
        result = metric_general(pa, pb, n, cfg.delta, opts);
    } else {
        const double d_max = std::max(pa->max_tile_diameter(), pb->max_tile_diameter());
        const double file_r = std::min(*pa->fixed_radius(), *pb->fixed_radius());
        double r_min = std::max(cfg.r_min, 1.0 / std::max(1.0, file_r - d_max - 4.0));
        if (!(r_min < kMetricCap))
            throw bad_input("metric: windows too small for the adapted metrics");
        if (which == "d1") result = metric_d1(pa, pb, r_min, opts);
        else if (which == "d2") result = metric_d2(pa, pb, r_min, opts);
        else if (which == "d3") result = metric_d3(pa, pb, r_min, opts, cfg.tau_area);
        else throw bad_input("unknown metric " + which);
    }
    std::cout << metric_to_json(result).dump(2) << "\n";
    return 0;
}

int cmd_flc(const std::string& config_path, const std::string& out) {
    RunConfig cfg = load_config(config_path);
    cfg.generator.initial_radius = cfg.flc_radii.back();
    auto provider = make_provider(cfg.generator);
    FLCReport report = classify_flc(provider, cfg.flc_radii, cfg.quantum, cfg.tau_geom);
    const json j = flc_report_to_json(report);
    std::cout << j.dump(2) << "\n";
    if (!out.empty()) save_json(out, j);
    return 0;
}

int cmd_search(const std::string& config_path, const std::string& out,
               const std::string& variant_flag, std::optional<double> epsilon,
               std::optional<std::uint64_t> n_budget, std::optional<double> radius,
               const std::string& ip_path, std::optional<unsigned> threads,
               std::optional<std::uint64_t> seed) {
    RunConfig cfg = load_config(config_path);
    if (!variant_flag.empty()) cfg.variant = parse_variant(variant_flag);
    if (epsilon) cfg.epsilon = *epsilon;
    if (n_budget) cfg.n_budget = *n_budget;
    if (radius) cfg.r_search = *radius;
    if (threads) cfg.threads = *threads;
    if (seed) cfg.generator.seed = *seed;
    if (!ip_path.empty()) cfg.ip = ip_spec_from_json(load_json(ip_path));

    cfg.generator.initial_radius = cfg.r_search;
    auto provider = make_provider(cfg.generator);
    SearchOptions opts;
    opts.threads = cfg.threads;
    opts.tol_geom = cfg.tau_geom;
    opts.tau_area_rel = cfg.tau_area;
    log_info("searching " + cfg.generator.kind + " variant " + to_string(cfg.variant) +
             " eps=" + std::to_string(cfg.epsilon) + " R=" + std::to_string(cfg.r_search));
    auto cert = search_witness(provider, cfg.pattern, cfg.epsilon, cfg.variant, cfg.n_budget,
                               cfg.r_search, cfg.ip, opts);
    if (!cert) {
        log_info("budget exhausted (not a refutation)");
        return 3;
    }
    if (!verify_witness(provider, cfg.pattern, *cert, cfg.tau_geom, cfg.tau_area))
        throw std::logic_error("search produced a certificate that failed verification");
    save_json(out, certificate_to_json(*cert, cfg.pattern));
    log_info("certificate n=" + std::to_string(cert->n) + " written to " + out);
    return 0;
}

int cmd_verify(const std::string& window_path, const std::string& cert_path,
               const std::string& out) {
    auto w = window_from_json(load_json(window_path));
    auto provider = fixed_window_provider(std::move(w));
    auto table = provider->prototile_table();
    CertificateFile cf = certificate_from_json(load_json(cert_path), table);

    bool valid = false;
    std::string reason = "ok";
    try {
        valid = verify_witness(provider, cf.pattern, cf.certificate);
        if (!valid) reason = "certificate conditions not satisfied";
    } catch (const insufficient_window& e) {
        throw bad_input(std::string("verify: ") + e.what());
    }
    json report{{"valid", valid},
                {"variant", to_string(cf.certificate.variant)},
                {"n", cf.certificate.n},
                {"epsilon", round12(cf.certificate.epsilon)},
                {"reason", reason}};
    std::cout << report.dump(2) << "\n";
    if (!out.empty()) save_json(out, report);
    return valid ? 0 : 2;
}

int cmd_render(const std::string& window_path, const std::string& cert_path,
               const std::string& out) {
    auto w = window_from_json(load_json(window_path));
    std::string svg;
    if (!cert_path.empty()) {
        auto provider = fixed_window_provider(TilingWindow(w));
        CertificateFile cf =
            certificate_from_json(load_json(cert_path), provider->prototile_table());
        svg = render_svg(w, &cf.certificate, &cf.pattern);
    } else {
        svg = render_svg(w);
    }
    save_text(out, svg);
    log_info("wrote " + out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tiling metrics and scaled pattern recurrence certificates"};
    app.require_subcommand(1);

    std::string config_path, out_path, metric_name = "d1", variant_flag, ip_path;
    std::string file_a, file_b, window_path, cert_path;
    double radius = 0.0;
    std::optional<double> epsilon;
    std::optional<std::uint64_t> n_budget, seed;
    std::optional<double> r_search;
    std::optional<unsigned> threads;

    auto* gen = app.add_subcommand("gen", "generate a tiling window file");
    gen->add_option("--config", config_path, "run configuration JSON");
    gen->add_option("--radius", radius, "window radius")->required();
    gen->add_option("--out", out_path, "output window JSON")->required();
    std::optional<std::uint64_t> gen_seed;
    gen->add_option("--seed", gen_seed, "generator seed override");

    auto* metric = app.add_subcommand("metric", "evaluate a tiling metric on two window files");
    metric->add_option("--config", config_path, "run configuration JSON");
    metric->add_option("--metric", metric_name, "d | d1 | d2 | d3");
    metric->add_option("fileA", file_a, "first window JSON")->required();
    metric->add_option("fileB", file_b, "second window JSON")->required();

    auto* flc = app.add_subcommand("flc", "classify finite local complexity evidence");
    flc->add_option("--config", config_path, "run configuration JSON")->required();
    flc->add_option("--out", out_path, "also write the report here");

    auto* search = app.add_subcommand("search", "search for a witness certificate");
    search->add_option("--config", config_path, "run configuration JSON")->required();
    search->add_option("--out", out_path, "output certificate JSON")->required();
    search->add_option("--variant", variant_flag, "thm1 | thm2 | thm3");
    search->add_option("--epsilon", epsilon, "epsilon override");
    search->add_option("--n-budget", n_budget, "dilation budget override");
    search->add_option("--radius", r_search, "search window radius override");
    search->add_option("--ip", ip_path, "IP-set spec JSON restricting n");
    search->add_option("--threads", threads, "parallelism cap");
    search->add_option("--seed", seed, "generator seed override");

    auto* verify = app.add_subcommand("verify", "verify a certificate against a window file");
    verify->add_option("window", window_path, "window JSON")->required();
    verify->add_option("certificate", cert_path, "certificate JSON")->required();
    verify->add_option("--out", out_path, "also write the report here");

    auto* render = app.add_subcommand("render", "render a window (and certificate) to SVG");
    render->add_option("window", window_path, "window JSON")->required();
    render->add_option("certificate", cert_path, "certificate JSON overlay");
    render->add_option("--out", out_path, "output SVG path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_gen(config_path, radius, out_path, gen_seed);
        if (metric->parsed()) return cmd_metric(config_path, metric_name, file_a, file_b);
        if (flc->parsed()) return cmd_flc(config_path, out_path);
        if (search->parsed())
            return cmd_search(config_path, out_path, variant_flag, epsilon, n_budget, r_search,
                              ip_path, threads, seed);
        if (verify->parsed()) return cmd_verify(window_path, cert_path, out_path);
        if (render->parsed()) return cmd_render(window_path, cert_path, out_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
