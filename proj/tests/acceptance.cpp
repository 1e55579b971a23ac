// Acceptance gate: one PASS/FAIL line per criterion. Exit status 1 if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "anosov/anosov.hpp"
#include "anosov/config.hpp"
#include "anosov/errors.hpp"
#include "anosov/jacobi.hpp"
#include "anosov/riccati.hpp"
#include "oracle.hpp"

using namespace anosov;

namespace {

std::string g_configs = CONFIG_DIR;

struct Outcome {
    bool pass = true;
    std::string detail;
};

void require(Outcome& o, bool cond, const std::string& what) {
    if (!cond) {
        o.pass = false;
        if (!o.detail.empty()) o.detail += "; ";
        o.detail += what;
    }
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

RunConfig config(const std::string& name) { return load_run_config(g_configs + "/" + name); }

AnosovReport run_check(const RunConfig& run) {
    const Surface s = build_surface(run.surface, run.window);
    return check_anosov(build_family(run, s), run.check);
}

Outcome hyperbolic_closed_forms() {
    Outcome o;
    const CurvatureProfile p = constant_profile(-1.0);
    const ScalarSolution a = solve_a(p, {0, 10});
    double ea = 0.0;
    for (int i = 0; i <= 10000; ++i) {
        const double s = i * 1e-3;
        ea = std::max(ea, std::abs(a.f(s) - std::sinh(s)));
    }
    require(o, ea <= 1e-7, "sinh error " + fmt("%.3g", ea));
    const StableData st = stable_data(p, {-64, 64});
    double ed = 0.0;
    for (int i = 0; i <= 12000; ++i) {
        const double s = -2.0 + i * 1e-3;
        ed = std::max(ed, std::abs(st.d.f(s) - std::exp(-s)));
    }
    require(o, ed <= 1e-6, "d error " + fmt("%.3g", ed));
    require(o, std::abs(st.d_slope + 1.0) <= 1e-6, "d'(0) = " + fmt("%.12g", st.d_slope));
    require(o, std::abs(st.dbar_slope - 1.0) <= 1e-6, "dbar'(0) = " + fmt("%.12g", st.dbar_slope));
    const double gap = transversality_gap(st);
    require(o, std::abs(gap - 2.0) <= 1e-5, "gap = " + fmt("%.12g", gap));
    if (o.pass) o.detail = "sinh err " + fmt("%.2g", ea) + ", d err " + fmt("%.2g", ed) + ", gap " + fmt("%.12g", gap);
    return o;
}

Outcome flat_case() {
    Outcome o;
    const Interval w{-64, 64};
    const CurvatureProfile p = constant_profile(0.0);
    const StableData st = stable_data(p, w);
    const double gap = transversality_gap(st);
    require(o, std::abs(gap) <= 1e-9, "gap = " + fmt("%.3g", gap));
    require(o, bounded_field_detector(st, w).found, "bounded field not found");
    require(o, parallel_field_detector(p, w).found, "parallel field not found");
    const AnosovReport rep = run_check(config("flat.json"));
    require(o, !rep.anosov, "flat chart reported Anosov");
    for (const auto& g : rep.geodesics) {
        const Conditions& c = g.conditions;
        require(o, !c.transversal && !c.no_bounded_field && !c.no_parallel_field && !c.negative_passage,
                g.id + " has a passing condition");
    }
    if (o.pass) o.detail = "not-anosov on " + std::to_string(rep.geodesics.size()) + " geodesics, all four conditions fail";
    return o;
}

Outcome sphere_case() {
    Outcome o;
    const ConjugateReport r = conjugate_points(constant_profile(1.0), {0, 6.5});
    require(o, r.zeros.size() == 2, std::to_string(r.zeros.size()) + " zeros");
    for (std::size_t i = 0; i < r.zeros.size() && i < 2; ++i) {
        const double z = M_PI * static_cast<double>(i + 1);
        require(o, r.zeros[i].first <= z + 1e-6 && r.zeros[i].second >= z - 1e-6, "bracket misses multiple of pi");
    }
    bool refused = false;
    try {
        run_check(config("sphere.json"));
    } catch (const ConjugatePointError&) {
        refused = true;
    }
    require(o, refused, "pipeline did not refuse");
    if (o.pass) o.detail = "zeros bracket pi and 2pi; check refused with a conjugate point error";
    return o;
}

Outcome riccati_envelopes() {
    Outcome o;
    const CurvatureProfile h = constant_profile(-1.0);
    const BoundReport eq = verify_coth_bound(riccati_from_jacobi(solve_a(h, {0, 20}), {0.01, 20}), 1.0, {0.01, 20});
    require(o, eq.max_violation <= 1e-7, "kappa=-1 coth violation " + fmt("%.3g", eq.max_violation));
    const double k = std::sqrt(1.9);
    const CurvatureProfile p = expression_profile("-1 + 0.9*sin(s)", {-1e3, 1e3}, k);
    const BoundReport cb = verify_coth_bound(riccati_from_jacobi(solve_a(p, {0, 20}), {0.05, 20}), k, {0.05, 20});
    const BoundReport nb = norm_derivative_bound(p, {-20, 20}, k, 0.05);
    require(o, cb.pass, "sin coth bound violation " + fmt("%.3g", cb.max_violation));
    require(o, nb.pass, "sin norm derivative violation " + fmt("%.3g", nb.max_violation));
    if (o.pass) {
        o.detail = "kappa=-1 violation " + fmt("%.2g", eq.max_violation) + ", sin coth " +
                   fmt("%.3g", cb.max_violation) + ", sin norm " + fmt("%.3g", nb.max_violation);
    }
    return o;
}

Outcome wronskian_constancy() {
    Outcome o;
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    double worst = 0.0;
    const Interval iv{-4, 4};
    for (int c = 0; c < 100; ++c) {
        const auto rp = c % 2 ? oracle::oscillating_profile(gen) : oracle::negative_profile(gen);
        const CurvatureProfile p = expression_profile(rp.text);
        const ScalarSolution f = integrate_jacobi(p, 0.0, U(gen), U(gen), iv);
        const ScalarSolution g = integrate_jacobi(p, 0.0, U(gen), U(gen), iv);
        const double w0 = wronskian(f, g, 0.0);
        for (int i = 0; i <= 80; ++i) {
            const double s = iv.lo + 0.1 * i;
            worst = std::max(worst, std::abs(wronskian(f, g, s) - w0));
        }
    }
    require(o, worst <= 1e-8, "max drift " + fmt("%.3g", worst));
    if (o.pass) o.detail = "100 cases, max drift " + fmt("%.2g", worst);
    return o;
}

Outcome limit_monotonicity() {
    Outcome o;
    std::mt19937_64 gen(606);
    double worst_drop = -INFINITY, worst_gap = INFINITY;
    for (int c = 0; c < 50; ++c) {
        const auto rp = oracle::negative_profile(gen, -0.05);
        const CurvatureProfile p = expression_profile(rp.text);
        double prev = -INFINITY;
        for (double T : {8.0, 16.0, 32.0, 64.0, 128.0}) {
            const double slope = solve_dt(p, T, {0, T}).fp(0.0);
            if (std::isfinite(prev)) worst_drop = std::max(worst_drop, prev - slope);
            prev = slope;
        }
        const StableData st = stable_data(p, {-128, 128});
        worst_gap = std::min(worst_gap, st.gap);
    }
    require(o, worst_drop <= 1e-10, "d_T'(0) decreased by " + fmt("%.3g", worst_drop));
    require(o, worst_gap >= -1e-9, "gap " + fmt("%.3g", worst_gap));
    if (o.pass) o.detail = "50 profiles, largest decrease " + fmt("%.2g", std::max(0.0, worst_drop)) + ", min gap " + fmt("%.3g", worst_gap);
    return o;
}

Outcome rate_fit() {
    Outcome o;
    const AnosovReport rep = run_check(config("hyperbolic.json"));
    const RateEstimate& r = rep.rate;
    require(o, r.fit_window.lo == 1.0 && r.fit_window.hi == 8.0, "fit window differs from [1, 8]");
    require(o, std::abs(r.c_const - 1.0) <= 0.01, "c = " + fmt("%.6g", r.c_const));
    require(o, std::abs(r.a_const - 1.0) <= 0.02, "a = " + fmt("%.6g", r.a_const));
    // Recompute the audit independently over every grid pair.
    double excess = -INFINITY;
    const auto& ph = r.phi_samples;
    for (std::size_t i = 0; i < ph.size(); ++i) {
        for (std::size_t j = 0; j < ph.size(); ++j) {
            for (std::size_t k = 0; k < ph.size(); ++k) {
                if (std::abs(ph[k].s - (ph[i].s + ph[j].s)) < 1e-9) {
                    excess = std::max(excess, ph[k].phi - ph[i].phi * ph[j].phi);
                }
            }
        }
    }
    require(o, excess <= 1e-6 && r.audit.holds, "submultiplicativity excess " + fmt("%.3g", excess));
    if (o.pass) o.detail = "c " + fmt("%.6f", r.c_const) + ", a " + fmt("%.6f", r.a_const) + ", audit excess " + fmt("%.2g", excess);
    return o;
}

Outcome condition_equivalence() {
    Outcome o;
    std::mt19937_64 gen(77);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    int anosov = 0, not_anosov = 0, focal = 0;
    for (int c = 0; c < 50; ++c) {
        CurvatureProfile p;
        switch (c % 4) {
            case 0:
            case 1:
                p = expression_profile(oracle::negative_profile(gen, -0.05).text);
                break;
            case 2:
                p = constant_profile(0.0);
                break;
            default: {
                char buf[160];
                std::snprintf(buf, sizeof buf, "-%.17g*exp(-((s - %.17g)/%.17g)^2)", 0.2 + 0.8 * U(gen),
                              4.0 * U(gen) - 2.0, 0.5 + U(gen));
                p = expression_profile(buf);
            }
        }
        CheckConfig cfg;
        cfg.k = std::max(p.lower_bound_k, 0.1);
        const AnosovReport rep = check_anosov(profile_family(p, 1, 1000 + c, {-64, 64}, 0.0), cfg);
        const GeodesicRecord& g = rep.geodesics.at(0);
        (rep.anosov ? anosov : not_anosov)++;
        require(o, g.conditions.transversal == g.conditions.no_bounded_field,
                "profile " + std::to_string(c) + ": transversality and no-bounded-field disagree");
        if (g.focal_ok) {
            ++focal;
            require(o, g.conditions.no_bounded_field == g.conditions.no_parallel_field,
                    "profile " + std::to_string(c) + ": no-bounded-field and no-parallel-field disagree");
        }
    }
    require(o, anosov > 0 && not_anosov > 0, "family is not mixed");
    if (o.pass) {
        o.detail = std::to_string(anosov) + " anosov, " + std::to_string(not_anosov) + " not, " +
                   std::to_string(focal) + " with focal monotonicity";
    }
    return o;
}

Outcome invariance_suite() {
    Outcome o;
    std::mt19937_64 gen(909);
    double shift_err = 0.0, rev_err = 0.0;
    const Interval w{-64, 64};
    for (int c = 0; c < 20; ++c) {
        const CurvatureProfile p = expression_profile(oracle::negative_profile(gen, -0.05).text);
        const StableData st = stable_data(p, w);
        for (double tau : {0.5, 1.0, 2.0}) {
            const StableData sh = stable_solution(shifted(p, tau), w);
            for (int i = 0; i <= 100; ++i) {
                const double s = -5.0 + 0.1 * i;
                const double ref = st.d.f(s + tau) / st.d.f(tau);
                shift_err = std::max(shift_err, std::abs(sh.d.f(s) - ref) / std::max(1.0, std::abs(ref)));
            }
        }
        // Unstable solution against the stable solution of the reversed profile, and against the
        // direct negative-horizon slope -b(-T)/a(-T).
        const StableData rev = stable_solution(reversed(p), w);
        for (int i = 0; i <= 100; ++i) {
            const double s = -5.0 + 0.1 * i;
            const double ref = rev.d.f(-s);
            rev_err = std::max(rev_err, std::abs(st.dbar.f(s) - ref) / std::max(1.0, std::abs(ref)));
            rev_err = std::max(rev_err, std::abs(st.dbar.fp(s) + rev.d.fp(-s)) / std::max(1.0, std::abs(ref)));
        }
        const double direct = solve_dt(p, -64.0, {-64, 0}).fp(0.0);
        rev_err = std::max(rev_err, std::abs(st.dbar_slope - direct));
    }
    require(o, shift_err <= 1e-6, "shift error " + fmt("%.3g", shift_err));
    require(o, rev_err <= 1e-8, "reversal error " + fmt("%.3g", rev_err));
    if (o.pass) o.detail = "shift err " + fmt("%.2g", shift_err) + ", reversal err " + fmt("%.2g", rev_err);
    return o;
}

Outcome poincare_disk() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const RunConfig run = config("poincare_disk.json");
    const Surface surface = build_surface(run.surface, run.window);
    std::mt19937_64 gen(10);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    double kerr = 0.0;
    for (int n = 0; n < 100;) {
        const double x = U(gen), y = U(gen);
        if (x * x + y * y >= 0.95 * 0.95) continue;
        kerr = std::max(kerr, std::abs(gaussian_curvature(*surface.chart, x, y) + 1.0));
        ++n;
    }
    require(o, kerr <= 1e-6, "curvature error " + fmt("%.3g", kerr));
    const AnosovReport rep = check_anosov(build_family(run, surface), run.check);
    require(o, rep.anosov, "verdict not-anosov");
    require(o, rep.geodesics.size() == 20, std::to_string(rep.geodesics.size()) + " geodesics");
    double gerr = 0.0;
    for (const auto& g : rep.geodesics) gerr = std::max(gerr, std::abs(g.gap - 2.0));
    require(o, gerr <= 1e-3, "gap error " + fmt("%.3g", gerr));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    require(o, secs <= 300.0, "runtime " + fmt("%.1f", secs) + " s");
    if (o.pass) {
        o.detail = "curvature err " + fmt("%.2g", kerr) + ", gap err " + fmt("%.2g", gerr) + ", " + fmt("%.1f", secs) + " s";
    }
    return o;
}

Outcome sasaki_identity() {
    Outcome o;
    std::mt19937_64 gen(1111);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    const CurvatureProfile p = expression_profile("-1 + 0.9*sin(s)");
    double worst = 0.0;
    for (int c = 0; c < 100; ++c) {
        const double w0 = U(gen), w1 = U(gen), t = 4.0 * U(gen);
        const TangentVector v = flow_pushforward(p, {w0, w1}, t);
        const double n2 = v.sasaki_norm() * v.sasaki_norm();
        const ScalarSolution j = integrate_jacobi(p, 0.0, w0, w1, {std::min(0.0, t), std::max(0.0, t)});
        const double lib = j.f(t) * j.f(t) + j.fp(t) * j.fp(t);
        const auto r = oracle::rk4_jacobi(p.eval, 0.0, {w0, w1}, t, 1e-4);
        const double ref = r.f * r.f + r.fp * r.fp;
        const double scale = std::max(1.0, ref);
        worst = std::max({worst, std::abs(n2 - lib) / scale, std::abs(n2 - ref) / scale});
    }
    require(o, worst <= 1e-8, "relative error " + fmt("%.3g", worst));
    if (o.pass) o.detail = "100 cases, max relative error " + fmt("%.2g", worst);
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1) g_configs = argv[1];
    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {"constant curvature -1 closed forms", hyperbolic_closed_forms},
        {"flat case degeneracy", flat_case},
        {"sphere refused for conjugate points", sphere_case},
        {"riccati envelopes", riccati_envelopes},
        {"wronskian constancy", wronskian_constancy},
        {"limit construction monotonicity", limit_monotonicity},
        {"rate fit and submultiplicativity", rate_fit},
        {"condition equivalences on mixed profiles", condition_equivalence},
        {"shift invariance and time reversal", invariance_suite},
        {"poincare disk end to end", poincare_disk},
        {"sasaki norm identity", sasaki_identity},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome out;
        try {
            out = criteria[i].run();
        } catch (const std::exception& e) {
            out.pass = false;
            out.detail = std::string("exception: ") + e.what();
        }
        if (!out.pass) ++failures;
        std::printf("criterion %zu: %s  %s (%s)\n", i + 1, out.pass ? "PASS" : "FAIL", criteria[i].name,
                    out.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
