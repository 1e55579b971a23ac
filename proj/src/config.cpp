#include "anosov/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "anosov/errors.hpp"
#include "anosov/expression.hpp"

namespace anosov {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!known.count(it.key())) throw ConfigError("unknown key '" + it.key() + "' in " + where);
    }
}

double number(const json& obj, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(std::string("'") + key + "' must be finite");
    return d;
}

double positive(const json& obj, const char* key, double fallback) {
    const double d = number(obj, key, fallback);
    if (!(d > 0.0)) throw ConfigError(std::string("'") + key + "' must be positive");
    return d;
}

std::vector<double> numbers(const json& obj, const char* key, std::size_t count) {
    const json& v = obj.at(key);
    if (!v.is_array() || v.size() != count) {
        throw ConfigError(std::string("'") + key + "' must be an array of " + std::to_string(count) + " numbers");
    }
    std::vector<double> out;
    for (const auto& x : v) {
        if (!x.is_number()) throw ConfigError(std::string("'") + key + "' must contain numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

Interval interval(const json& obj, const char* key, Interval fallback) {
    if (!obj.contains(key)) return fallback;
    const auto v = numbers(obj, key, 2);
    if (!(v[1] > v[0])) throw ConfigError(std::string("'") + key + "' must satisfy lo < hi");
    return {v[0], v[1]};
}

bool flag(const json& obj, const char* key) {
    if (!obj.contains(key)) return false;
    if (!obj.at(key).is_boolean()) throw ConfigError(std::string("'") + key + "' must be true or false");
    return obj.at(key).get<bool>();
}

SurfaceKind parse_kind(const std::string& text) {
    if (text == "constant") return SurfaceKind::Constant;
    if (text == "kappa-expression") return SurfaceKind::KappaExpression;
    if (text == "conformal-chart") return SurfaceKind::ConformalChart;
    throw ConfigError("unknown surface kind '" + text + "' (expected constant, kappa-expression or conformal-chart)");
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what(), e.byte);
    }
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    reject_unknown(doc,
                   {"name", "kind", "expression", "k_lower_bound", "domain", "derivative_mode", "fd_step",
                    "sample_box", "window", "samples", "seed", "shift_span", "grid_step", "riccati_s_min",
                    "growth_R", "tolerances", "horizons", "fit_window", "phi_step", "asserted"},
                   "config");

    RunConfig run;
    SurfaceConfig& s = run.surface;
    try {
        if (!doc.contains("kind") || !doc.at("kind").is_string()) throw ConfigError("'kind' is required");
        s.kind = parse_kind(doc.at("kind").get<std::string>());
        if (!doc.contains("expression")) throw ConfigError("'expression' is required");
        const json& ex = doc.at("expression");
        if (ex.is_number()) {
            std::ostringstream os;
            os.precision(17);
            os << ex.get<double>();
            s.expression = os.str();
        } else if (ex.is_string()) {
            s.expression = ex.get<std::string>();
        } else {
            throw ConfigError("'expression' must be a string or number");
        }
        if (doc.contains("name")) s.name = doc.at("name").get<std::string>();
        if (doc.contains("k_lower_bound")) {
            const double k = number(doc, "k_lower_bound", 0.0);
            if (k < 0.0) throw ConfigError("'k_lower_bound' must be nonnegative");
            s.k_lower_bound = k;
        }
        if (doc.contains("domain")) {
            s.domain = numbers(doc, "domain", s.kind == SurfaceKind::ConformalChart ? 4 : 2);
        }
        if (doc.contains("derivative_mode")) {
            const std::string m = doc.at("derivative_mode").get<std::string>();
            if (m == "analytic") {
                s.derivative_mode = DerivativeMode::Analytic;
            } else if (m == "finite-difference") {
                s.derivative_mode = DerivativeMode::FiniteDifference;
            } else {
                throw ConfigError("'derivative_mode' must be analytic or finite-difference");
            }
        }
        s.fd_step = positive(doc, "fd_step", s.fd_step);
        if (doc.contains("sample_box")) {
            const auto b = numbers(doc, "sample_box", 4);
            if (!(b[1] > b[0]) || !(b[3] > b[2])) throw ConfigError("'sample_box' must be [x0, x1, y0, y1] with x0 < x1, y0 < y1");
            s.sample_box = Rect{b[0], b[1], b[2], b[3]};
        }
        if (doc.contains("asserted")) {
            const json& a = doc.at("asserted");
            if (!a.is_object()) throw ConfigError("'asserted' must be an object");
            reject_unknown(a, {"complete", "compactly_homogeneous"}, "asserted");
            s.asserted_complete = flag(a, "complete");
            s.asserted_compactly_homogeneous = flag(a, "compactly_homogeneous");
        }

        run.window = interval(doc, "window", run.window);
        if (!(run.window.lo <= 0.0 && run.window.hi > 0.0)) throw ConfigError("'window' must contain 0");
        if (doc.contains("samples")) {
            if (!doc.at("samples").is_number_integer() || doc.at("samples").get<long>() < 1) {
                throw ConfigError("'samples' must be a positive integer");
            }
            run.samples = doc.at("samples").get<int>();
        }
        if (doc.contains("seed")) {
            if (!doc.at("seed").is_number_unsigned()) throw ConfigError("'seed' must be a nonnegative integer");
            run.seed = doc.at("seed").get<std::uint64_t>();
        }
        run.shift_span = number(doc, "shift_span", run.shift_span);
        if (run.shift_span < 0.0) throw ConfigError("'shift_span' must be nonnegative");
        run.grid_step = positive(doc, "grid_step", run.grid_step);
        run.riccati_s_min = positive(doc, "riccati_s_min", run.riccati_s_min);
        run.growth_R = positive(doc, "growth_R", run.growth_R);

        CheckConfig& c = run.check;
        if (doc.contains("tolerances")) {
            const json& t = doc.at("tolerances");
            if (!t.is_object()) throw ConfigError("'tolerances' must be an object");
            reject_unknown(t, {"gap_tol", "kappa_tol", "bound_cap", "slope_tol", "rel_tol", "abs_tol", "max_step"},
                           "tolerances");
            c.gap_tol = positive(t, "gap_tol", c.gap_tol);
            c.kappa_tol = positive(t, "kappa_tol", c.kappa_tol);
            c.bound_cap = positive(t, "bound_cap", c.bound_cap);
            c.limit.slope_tol = positive(t, "slope_tol", c.limit.slope_tol);
            c.integrator.rel_tol = positive(t, "rel_tol", c.integrator.rel_tol);
            c.integrator.abs_tol = positive(t, "abs_tol", c.integrator.abs_tol);
            c.integrator.max_step = positive(t, "max_step", c.integrator.max_step);
        }
        if (doc.contains("horizons")) {
            const json& h = doc.at("horizons");
            if (!h.is_object()) throw ConfigError("'horizons' must be an object");
            reject_unknown(h, {"t_start", "growth_factor"}, "horizons");
            c.limit.t_start = positive(h, "t_start", c.limit.t_start);
            c.limit.growth_factor = number(h, "growth_factor", c.limit.growth_factor);
            if (!(c.limit.growth_factor > 1.0)) throw ConfigError("'growth_factor' must exceed 1");
        }
        c.fit_window = interval(doc, "fit_window", c.fit_window);
        c.phi_step = positive(doc, "phi_step", c.phi_step);
        if (s.k_lower_bound) c.k = *s.k_lower_bound;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    return run;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return parse_run_config(os.str());
}

Surface build_surface(const SurfaceConfig& spec, Interval window) {
    Surface out;
    const double k = spec.k_lower_bound.value_or(-1.0);
    Interval dom{-1e3, 1e3};
    if (spec.kind != SurfaceKind::ConformalChart && spec.domain.size() == 2) {
        dom = {spec.domain[0], spec.domain[1]};
        if (!(dom.hi > dom.lo)) throw ConfigError("'domain' must satisfy lo < hi");
    }
    switch (spec.kind) {
        case SurfaceKind::Constant: {
            const Expression e = Expression::parse(spec.expression, {});
            CurvatureProfile p = constant_profile(e.evaluate({}), dom);
            if (k >= 0.0) p.lower_bound_k = k;
            out.profile = std::move(p);
            break;
        }
        case SurfaceKind::KappaExpression: {
            const Expression e = Expression::parse(spec.expression, {Var::S});
            double kk = k;
            if (kk < 0.0) {
                // Estimate over the working window, widened so shifted copies stay covered.
                const Interval w{std::max(dom.lo, window.lo - 32.0), std::min(dom.hi, window.hi + 32.0)};
                kk = estimate_lower_bound_k([&e](double s) { return e(s); }, w);
            }
            out.profile = expression_profile(e, dom, kk);
            break;
        }
        case SurfaceKind::ConformalChart: {
            Rect r{-1.0, 1.0, -1.0, 1.0};
            if (spec.domain.size() == 4) r = {spec.domain[0], spec.domain[1], spec.domain[2], spec.domain[3]};
            out.chart = ConformalChart(Expression::parse(spec.expression, {Var::X, Var::Y}), r, spec.derivative_mode,
                                       spec.fd_step);
            break;
        }
    }
    out.description = spec.name.empty() ? (out.profile ? out.profile->description : out.chart->description())
                                        : spec.name;
    return out;
}

GeodesicFamily build_family(const RunConfig& run, const Surface& surface) {
    GeodesicFamily fam;
    if (surface.profile) {
        const Interval dom = surface.profile->domain;
        const double span = run.shift_span;
        if (!(dom.lo <= run.window.lo - span && dom.hi >= run.window.hi + span)) {
            throw ConfigError("profile domain must cover the window widened by shift_span");
        }
        fam = profile_family(*surface.profile, run.samples, run.seed, run.window, span);
    } else {
        fam = chart_family(*surface.chart, run.samples, run.seed, run.window, run.surface.sample_box,
                           run.check.integrator);
        if (run.surface.k_lower_bound) {
            for (auto& m : fam.members) m.profile.lower_bound_k = *run.surface.k_lower_bound;
        }
    }
    fam.description = surface.description;
    return fam;
}

FamilyMember primary_member(const RunConfig& run, const Surface& surface) {
    if (surface.profile) {
        if (!surface.profile->domain.contains(run.window)) throw ConfigError("window lies outside the profile domain");
        FamilyMember m;
        m.id = "profile";
        m.profile = *surface.profile;
        m.window = run.window;
        return m;
    }
    RunConfig one = run;
    one.samples = 1;
    GeodesicFamily fam = build_family(one, surface);
    return fam.members.front();
}

}  // namespace anosov
