// anosov-geo: command-line front end for the surface analysis pipelines.
//
// Exit codes: 0 ok / Anosov, 1 not Anosov, 2 config or usage error, 3 convergence or integration
// failure, 4 conjugate point where the command assumes none.

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "anosov/anosov.hpp"
#include "anosov/config.hpp"
#include "anosov/errors.hpp"
#include "anosov/export.hpp"
#include "anosov/jacobi.hpp"
#include "anosov/riccati.hpp"

namespace fs = std::filesystem;
using namespace anosov;

namespace {

enum Exit { kOk = 0, kNotAnosov = 1, kConfig = 2, kConvergence = 3, kHypothesis = 4 };

struct Options {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::optional<int> samples;
    std::string window;
    std::string formats = "csv,json";
    std::optional<double> tol_slope;
    std::optional<double> gap_tol;
};

struct Formats {
    bool csv = false;
    bool json = false;
};

Formats parse_formats(const std::string& text) {
    Formats f;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t end = std::min(text.find(',', start), text.size());
        const std::string item = text.substr(start, end - start);
        if (item == "csv") {
            f.csv = true;
        } else if (item == "json") {
            f.json = true;
        } else {
            throw ConfigError("unknown format '" + item + "' (expected csv and/or json)");
        }
        start = end + 1;
    }
    return f;
}

double parse_double(const std::string& text, const std::string& what) {
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        throw ConfigError("cannot parse " + what + " '" + text + "'");
    }
    return v;
}

Interval parse_window(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw ConfigError("--window expects LO:HI");
    const Interval w{parse_double(text.substr(0, colon), "window start"),
                     parse_double(text.substr(colon + 1), "window end")};
    if (!(w.lo <= 0.0 && w.hi > 0.0)) throw ConfigError("--window must contain 0 with HI > 0");
    return w;
}

RunConfig resolve(const Options& opt) {
    RunConfig run = load_run_config(opt.config_path);
    if (opt.seed) run.seed = *opt.seed;
    if (opt.samples) {
        if (*opt.samples < 1) throw ConfigError("--samples must be at least 1");
        run.samples = *opt.samples;
    }
    if (!opt.window.empty()) run.window = parse_window(opt.window);
    if (opt.tol_slope) {
        if (!(*opt.tol_slope > 0.0)) throw ConfigError("--tol-slope must be positive");
        run.check.limit.slope_tol = *opt.tol_slope;
    }
    if (opt.gap_tol) {
        if (!(*opt.gap_tol > 0.0)) throw ConfigError("--gap-tol must be positive");
        run.check.gap_tol = *opt.gap_tol;
    }
    return run;
}

class Writer {
public:
    Writer(const std::string& dir, Formats formats) : dir_(dir), formats_(formats) {}

    void csv(const std::string& name, const CsvTable& table) {
        if (formats_.csv) pending_.push_back({name, table.str()});
    }
    void json(const std::string& name, const Json& doc) {
        if (formats_.json) pending_.push_back({name, doc.dump(2) + "\n"});
    }
    // All files are written at the end of the run.
    void flush() {
        fs::create_directories(dir_);
        for (const auto& [name, text] : pending_) {
            std::ofstream out(dir_ / name, std::ios::binary);
            if (!out) throw ConfigError("cannot write " + (dir_ / name).string());
            out << text;
        }
    }

private:
    fs::path dir_;
    Formats formats_;
    std::vector<std::pair<std::string, std::string>> pending_;
};

void require_no_conjugate_points(const FamilyMember& m, const IntegratorConfig& cfg) {
    const ConjugateReport conj = conjugate_points(m.profile, m.window, cfg);
    if (!conj.ok) {
        throw ConjugatePointError("geodesic " + m.id + " has conjugate points; the command assumes none", conj.zeros);
    }
}

Json run_header(const RunConfig& run, const Surface& surface) {
    Json j;
    j["surface"] = surface.description;
    j["window"] = to_json(run.window);
    j["seed"] = run.seed;
    j["asserted"] = {{"complete", run.surface.asserted_complete},
                     {"compactly_homogeneous", run.surface.asserted_compactly_homogeneous}};
    return j;
}

int cmd_jacobi(const RunConfig& run, Writer& w) {
    const Surface surface = build_surface(run.surface, run.window);
    const FamilyMember m = primary_member(run, surface);
    const IntegratorConfig& cfg = run.check.integrator;
    require_no_conjugate_points(m, cfg);
    const ScalarSolution a = solve_a(m.profile, m.window, cfg);
    const StableData st = stable_data(m.profile, m.window, run.check.limit, cfg);
    w.csv("jacobi.csv", jacobi_table(a, st, m.window, run.grid_step));
    Json j = run_header(run, surface);
    j["geodesic"] = m.id;
    j["stable"] = to_json(st);
    w.json("stable.json", j);
    std::cout << "d'(0) = " << format_number(st.d_slope) << ", dbar'(0) = " << format_number(st.dbar_slope)
              << ", gap = " << format_number(st.gap) << "\n";
    return kOk;
}

int cmd_stable(const RunConfig& run, Writer& w) {
    const Surface surface = build_surface(run.surface, run.window);
    const FamilyMember m = primary_member(run, surface);
    const IntegratorConfig& cfg = run.check.integrator;
    require_no_conjugate_points(m, cfg);
    const StableData st = stable_data(m.profile, m.window, run.check.limit, cfg);
    CsvTable seq({"direction", "horizon", "raw_slope", "corrected_slope"});
    for (std::size_t i = 0; i < st.forward.horizons.size(); ++i) {
        seq.add_row(std::vector<std::string>{"forward", format_number(st.forward.horizons[i]),
                                             format_number(st.forward.raw[i]),
                                             format_number(st.forward.corrected[i])});
    }
    for (std::size_t i = 0; i < st.backward.horizons.size(); ++i) {
        // The backward sequence is computed on kappa(-s); report slopes of the original profile.
        seq.add_row(std::vector<std::string>{"backward", format_number(-st.backward.horizons[i]),
                                             format_number(-st.backward.raw[i]),
                                             format_number(-st.backward.corrected[i])});
    }
    w.csv("slopes.csv", seq);
    Json j = run_header(run, surface);
    j["geodesic"] = m.id;
    j["stable"] = to_json(st);
    j["transversality_gap"] = transversality_gap(st);
    w.json("stable.json", j);
    std::cout << "gap = " << format_number(st.gap) << " (residual " << format_number(st.residual) << ")\n";
    return kOk;
}

int cmd_riccati(const RunConfig& run, Writer& w) {
    const Surface surface = build_surface(run.surface, run.window);
    const FamilyMember m = primary_member(run, surface);
    const IntegratorConfig& cfg = run.check.integrator;
    const double k = run.check.k >= 0.0 ? run.check.k : m.profile.lower_bound_k;
    const Interval iv{run.riccati_s_min, m.window.hi};
    const ScalarSolution a = solve_a(m.profile, {0.0, m.window.hi}, cfg);
    const RiccatiSolution u = riccati_from_jacobi(a, iv);
    const BoundReport coth = verify_coth_bound(u, k, iv);
    w.csv("riccati.csv", riccati_table(u, k, iv, run.grid_step));
    Json j = run_header(run, surface);
    j["geodesic"] = m.id;
    j["k"] = k;
    j["bound"] = to_json(coth);
    w.json("riccati.json", j);
    std::cout << "coth bound " << (coth.pass ? "pass" : "fail") << " (max violation "
              << format_number(coth.max_violation) << ")\n";
    return kOk;
}

int cmd_bounds(const RunConfig& run, Writer& w) {
    const Surface surface = build_surface(run.surface, run.window);
    const FamilyMember m = primary_member(run, surface);
    const IntegratorConfig& cfg = run.check.integrator;
    require_no_conjugate_points(m, cfg);
    const double k = run.check.k >= 0.0 ? run.check.k : m.profile.lower_bound_k;
    const Interval positive{run.riccati_s_min, m.window.hi};

    const ScalarSolution a = solve_a(m.profile, {0.0, m.window.hi}, cfg);
    const StableData st = stable_data(m.profile, m.window, run.check.limit, cfg);
    const std::vector<BoundReport> reports{
        verify_coth_bound(riccati_from_jacobi(a, positive), k, positive),
        norm_derivative_bound(m.profile, m.window, k, run.riccati_s_min, {}, cfg),
        verify_green_bound(riccati_from_jacobi(st.d, m.window), k, m.window),
        stable_slope_bound(st, k, m.window),
    };
    const GrowthReport growth = growth_threshold(m.profile, run.growth_R, m.window, k, 1e-3, run.check.limit, cfg);

    Json j = run_header(run, surface);
    j["geodesic"] = m.id;
    j["k"] = k;
    Json arr = Json::array();
    bool all = true;
    for (const auto& r : reports) {
        arr.push_back(to_json(r));
        all = all && r.pass;
    }
    j["bounds"] = arr;
    j["growth"] = to_json(growth);
    Json tails = Json::array();
    CsvTable tail_csv({"s", "tail_mass"});
    for (double s : {0.5, 1.0, 2.0, 4.0, 8.0}) {
        if (s >= m.window.hi) break;
        const double mass = tail_mass(m.profile, s, m.window.hi, run.check.limit, cfg);
        tails.push_back(Json::array({s, mass}));
        tail_csv.add_row(std::vector<double>{s, mass});
    }
    j["tail_mass"] = tails;
    w.json("bounds.json", j);
    w.csv("tail_mass.csv", tail_csv);
    for (const auto& r : reports) {
        std::cout << r.bound_name << ": " << (r.pass ? "pass" : "fail") << " (max violation "
                  << format_number(r.max_violation) << ")\n";
    }
    std::cout << (all ? "all bounds hold" : "some bounds fail") << " on the window\n";
    return kOk;
}

int cmd_rates(const RunConfig& run, Writer& w) {
    const Surface surface = build_surface(run.surface, run.window);
    const GeodesicFamily fam = build_family(run, surface);
    const AnosovReport report = check_anosov(fam, run.check);
    w.csv("phi.csv", phi_table(report.rate.phi_samples));
    Json j = run_header(run, surface);
    j["sample_count"] = report.sample_count;
    j["rate"] = to_json(report.rate);
    w.json("rates.json", j);
    std::cout << "c = " << format_number(report.rate.c_const) << ", a = " << format_number(report.rate.a_const)
              << "\n";
    return kOk;
}

int cmd_check(const RunConfig& run, Writer& w) {
    const Surface surface = build_surface(run.surface, run.window);
    const GeodesicFamily fam = build_family(run, surface);
    AnosovReport report = check_anosov(fam, run.check);
    if (run.surface.asserted_complete || run.surface.asserted_compactly_homogeneous) {
        report.notes.push_back("completeness and compact homogeneity are user-asserted, not checked");
    } else {
        report.notes.push_back("completeness and compact homogeneity were not asserted");
    }
    Json j = to_json(report);
    j["asserted"] = {{"complete", run.surface.asserted_complete},
                     {"compactly_homogeneous", run.surface.asserted_compactly_homogeneous}};
    w.json("report.json", j);
    w.csv("geodesics.csv", geodesic_table(report));
    std::cout << (report.anosov ? "anosov" : "not-anosov") << " (" << report.evidence << ", "
              << report.sample_count << " geodesics)\n";
    return report.anosov ? kOk : kNotAnosov;
}

int cmd_trace(const RunConfig& run, Writer& w) {
    const Surface surface = build_surface(run.surface, run.window);
    if (!surface.chart) throw ConfigError("trace needs a conformal-chart surface");
    const auto tangents = run.surface.sample_box
                              ? sample_unit_tangents(*surface.chart, run.samples, run.seed, *run.surface.sample_box)
                              : sample_unit_tangents(*surface.chart, run.samples, run.seed);
    for (std::size_t i = 0; i < tangents.size(); ++i) {
        const GeodesicTrace tr = geodesic_trace_two_sided(*surface.chart, tangents[i].point, tangents[i].velocity,
                                                          std::max(0.0, -run.window.lo), run.window.hi,
                                                          run.check.integrator);
        w.csv("trace_" + std::to_string(i) + ".csv", trace_table(tr));
    }
    std::cout << tangents.size() << " traces\n";
    return kOk;
}

void report_error(const std::string& kind, const std::string& message, Json extra = Json::object()) {
    Json j;
    j["error"] = kind;
    j["message"] = message;
    for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
    std::cerr << j.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Anosov analysis of geodesic flows on surfaces without conjugate points"};
    app.require_subcommand(1);
    Options opt;

    using Command = int (*)(const RunConfig&, Writer&);
    const std::vector<std::tuple<std::string, std::string, Command>> commands{
        {"jacobi", "solutions a, d, dbar on a grid", cmd_jacobi},
        {"stable", "stable and unstable slopes and the horizon sequence", cmd_stable},
        {"riccati", "u = a'/a against the coth envelope", cmd_riccati},
        {"bounds", "comparison bounds, growth threshold and tail mass", cmd_bounds},
        {"rates", "phi(s) samples and fitted constants", cmd_rates},
        {"check-anosov", "evaluate the equivalent conditions on a sampled family", cmd_check},
        {"trace", "geodesic traces of a conformal chart", cmd_trace},
    };
    std::vector<CLI::App*> subs;
    for (const auto& [name, help, fn] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", opt.config_path, "surface config (JSON)")->required();
        sub->add_option("--out", opt.out_dir, "output directory");
        sub->add_option("--seed", opt.seed, "sampling seed");
        sub->add_option("--samples", opt.samples, "number of sampled geodesics");
        sub->add_option("--window", opt.window, "arc-length window LO:HI (use --window=LO:HI for negative LO)");
        sub->add_option("--format", opt.formats, "comma-separated output formats: csv,json");
        sub->add_option("--tol-slope", opt.tol_slope, "Cauchy tolerance for the stable slope");
        sub->add_option("--gap-tol", opt.gap_tol, "transversality gap tolerance");
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfig;
    }

    try {
        const RunConfig run = resolve(opt);
        Writer writer(opt.out_dir, parse_formats(opt.formats));
        int code = kOk;
        for (std::size_t i = 0; i < subs.size(); ++i) {
            if (subs[i]->parsed()) code = std::get<2>(commands[i])(run, writer);
        }
        writer.flush();
        return code;
    } catch (const ParseError& e) {
        report_error("parse", e.what(), {{"position", e.position()}});
        return kConfig;
    } catch (const ConfigError& e) {
        report_error("config", e.what());
        return kConfig;
    } catch (const ConjugatePointError& e) {
        Json brackets = Json::array();
        for (const auto& b : e.brackets()) brackets.push_back(Json::array({b.first, b.second}));
        report_error("conjugate-point", e.what(), {{"brackets", brackets}});
        return kHypothesis;
    } catch (const PoleError& e) {
        report_error("conjugate-point", e.what(),
                     {{"brackets", Json::array({Json::array({e.bracket().first, e.bracket().second})})}});
        return kHypothesis;
    } catch (const ConvergenceError& e) {
        report_error("convergence", e.what(), {{"residual", std::isfinite(e.residual()) ? Json(e.residual()) : Json()}});
        return kConvergence;
    } catch (const IntegrationError& e) {
        report_error("integration", e.what(), {{"good_interval", Json::array({e.good_lo(), e.good_hi()})}});
        return kConvergence;
    } catch (const DataError& e) {
        report_error("data", e.what());
        return kConvergence;
    } catch (const Error& e) {
        report_error("domain", e.what());
        return kConfig;
    } catch (const std::invalid_argument& e) {
        report_error("config", e.what());
        return kConfig;
    } catch (const std::exception& e) {
        report_error("internal", e.what());
        return kConfig;
    }
}
