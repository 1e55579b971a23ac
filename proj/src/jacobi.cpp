#include "anosov/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

namespace anosov {

namespace {

void require_origin(Interval window) {
    if (!(window.lo <= 0.0 && window.hi >= 0.0) || !(window.hi > window.lo)) {
        std::ostringstream os;
        os << "window [" << window.lo << ", " << window.hi << "] must contain 0";
        throw DomainError(os.str());
    }
}

double frozen_decay(const CurvatureProfile& profile, double s) {
    return std::sqrt(std::max(0.0, -eval_curvature(profile, s)));
}

double simpson(const std::function<double(double)>& g, double lo, double hi, double flo, double fmid, double fhi,
               double whole, double tol, int depth) {
    const double mid = 0.5 * (lo + hi);
    const double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
    const double flm = g(lm), frm = g(rm);
    const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
    const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson(g, lo, mid, flo, flm, fmid, left, 0.5 * tol, depth - 1) +
           simpson(g, mid, hi, fmid, frm, fhi, right, 0.5 * tol, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& g, double lo, double hi, double tol) {
    const double flo = g(lo), fhi = g(hi), fmid = g(0.5 * (lo + hi));
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    return simpson(g, lo, hi, flo, fmid, fhi, whole, tol, 50);
}

// Reflect a solution of kappa(-s) to a solution of kappa(s): g(s) = f(-s).
ScalarSolution reflect(const ScalarSolution& f) {
    std::vector<JacobiNode> out;
    const auto nodes = f.nodes();
    out.reserve(nodes.size());
    for (std::size_t i = nodes.size(); i-- > 0;) {
        const auto& n = nodes[i];
        out.push_back({-n.s, n.f, -n.fp, n.fpp});
    }
    return ScalarSolution(std::move(out));
}

}  // namespace

ScalarSolution solve_a(const CurvatureProfile& profile, Interval window, const IntegratorConfig& cfg) {
    require_origin(window);
    return integrate_jacobi(profile, 0.0, 0.0, 1.0, window, cfg);
}

ScalarSolution solve_b(const CurvatureProfile& profile, Interval window, const IntegratorConfig& cfg) {
    require_origin(window);
    return integrate_jacobi(profile, 0.0, 1.0, 0.0, window, cfg);
}

ScalarSolution solve_dt(const CurvatureProfile& profile, double t, Interval window, const IntegratorConfig& cfg) {
    if (t == 0.0) throw DomainError("solve_dt needs t != 0");
    require_origin(window);
    if (!window.contains(t)) throw DomainError("t lies outside the window");
    const ScalarSolution a = solve_a(profile, window, cfg);
    const ScalarSolution b = solve_b(profile, window, cfg);
    const double at = a.f(t);
    if (std::abs(at) < 1e-12) {
        std::ostringstream os;
        os << "a(" << t << ") = " << at << " vanishes: conjugate point";
        throw ConjugatePointError(os.str(), {{t, t}});
    }
    const double ratio = b.f(t) / at;
    // Combine on the finer of the two node sets, evaluating the other densely.
    std::vector<JacobiNode> out;
    out.reserve(b.nodes().size());
    for (const auto& nb : b.nodes()) {
        const auto [av, ad] = a.eval(nb.s);
        // d_t'' = b'' - r a'' = b'' + r kappa a
        const double kappa_a = eval_curvature(profile, nb.s) * av;
        out.push_back({nb.s, nb.f - ratio * av, nb.fp - ratio * ad, nb.fpp + ratio * kappa_a});
    }
    return ScalarSolution(std::move(out));
}

double dt_by_quadrature(const ScalarSolution& a, double t, double s, double tol) {
    const bool positive = s > 0.0 && s <= t;
    const bool negative = s < 0.0 && t <= s;
    if (!positive && !negative) throw DomainError("quadrature needs 0 < s <= t or t <= s < 0");
    const auto g = [&a](double u) {
        const double v = a.f(u);
        return 1.0 / (v * v);
    };
    const double integral = adaptive_simpson(g, std::min(s, t), std::max(s, t), tol);
    // For t < s < 0 the integral runs backward.
    return a.f(s) * (positive ? integral : -integral);
}

SlopeSequence stable_slope_sequence(const CurvatureProfile& profile, double horizon, const LimitConfig& limit,
                                    const IntegratorConfig& cfg) {
    if (!(limit.t_start > 0.0) || !(limit.growth_factor > 1.0) || !(limit.slope_tol > 0.0)) {
        throw std::invalid_argument("limit schedule needs t_start > 0, growth_factor > 1, slope_tol > 0");
    }
    if (horizon < limit.t_start * limit.growth_factor) {
        throw ConvergenceError("window too short for the horizon schedule",
                               std::numeric_limits<double>::infinity());
    }
    const ScalarSolution a = integrate_jacobi(profile, 0.0, 0.0, 1.0, {0.0, horizon}, cfg);
    const ScalarSolution b = integrate_jacobi(profile, 0.0, 1.0, 0.0, {0.0, horizon}, cfg);

    SlopeSequence seq;
    for (double T = limit.t_start; T <= horizon * (1.0 + 1e-12); T *= limit.growth_factor) {
        const double Tc = std::min(T, horizon);  // absorbs round-off in the last doubling
        const auto [av, ad] = a.eval(Tc);
        const auto [bv, bd] = b.eval(Tc);
        if (std::abs(av) < 1e-12) {
            std::ostringstream os;
            os << "a vanishes at horizon " << Tc;
            throw ConjugatePointError(os.str(), {{Tc, Tc}});
        }
        const double raw = -bv / av;
        // d_T'(0) + (value of the omitted tail) when kappa is frozen at kappa(T) beyond T.
        const double q = frozen_decay(profile, Tc);
        const double denom = ad + q * av;
        const double corrected = denom > 0.0 ? -(bd + q * bv) / denom : raw;
        seq.horizons.push_back(Tc);
        seq.raw.push_back(raw);
        seq.corrected.push_back(corrected);
        const std::size_t n = seq.raw.size();
        if (n >= 2) {
            if (seq.raw[n - 1] < seq.raw[n - 2] - 1e-10) seq.monotone = false;
            const double diff = std::abs(seq.corrected[n - 1] - seq.corrected[n - 2]);
            seq.residual = diff;
            if (diff < limit.slope_tol && seq.converged_horizon == 0.0) seq.converged_horizon = seq.horizons[n - 2];
        }
    }
    if (seq.converged_horizon == 0.0) {
        std::ostringstream os;
        os << "stable slope did not converge within horizon " << horizon << " (last residual " << seq.residual
           << ")";
        throw ConvergenceError(os.str(), seq.residual);
    }
    // Report the residual at the first converged pair.
    for (std::size_t i = 1; i < seq.horizons.size(); ++i) {
        if (seq.horizons[i - 1] == seq.converged_horizon) {
            seq.residual = std::abs(seq.corrected[i] - seq.corrected[i - 1]);
            break;
        }
    }
    return seq;
}

StableData stable_solution(const CurvatureProfile& profile, Interval window, const LimitConfig& limit,
                           const IntegratorConfig& cfg) {
    require_origin(window);
    StableData out;
    out.forward = stable_slope_sequence(profile, window.hi, limit, cfg);
    out.residual = out.forward.residual;
    out.monotone = out.forward.monotone;
    out.horizon_used = window.hi;

    const double hi = window.hi;
    const double q = frozen_decay(profile, hi);
    const ScalarSolution right = integrate_jacobi(profile, hi, 1.0, -q, {0.0, hi}, cfg);
    const auto right_nodes = right.nodes();
    const JacobiNode& origin = right_nodes.front();
    if (origin.s != 0.0 || !(std::abs(origin.f) > 0.0) || !std::isfinite(origin.f)) {
        throw ConvergenceError("stable solution degenerates at s = 0", out.residual);
    }
    const double scale = 1.0 / origin.f;
    out.d_slope = origin.fp * scale;

    std::vector<JacobiNode> nodes;
    if (window.lo < 0.0) {
        const ScalarSolution left = integrate_jacobi(profile, 0.0, 1.0, out.d_slope, {window.lo, 0.0}, cfg);
        const auto ln = left.nodes();
        nodes.assign(ln.begin(), ln.end() - 1);
    }
    for (const auto& n : right_nodes) nodes.push_back({n.s, n.f * scale, n.fp * scale, n.fpp * scale});
    nodes[window.lo < 0.0 ? nodes.size() - right_nodes.size() : 0].f = 1.0;
    out.d = ScalarSolution(std::move(nodes));
    return out;
}

StableData unstable_solution(const CurvatureProfile& profile, Interval window, const LimitConfig& limit,
                             const IntegratorConfig& cfg) {
    require_origin(window);
    const StableData rev = stable_solution(reversed(profile), {-window.hi, -window.lo}, limit, cfg);
    StableData out;
    out.dbar = reflect(rev.d);
    out.dbar_slope = -rev.d_slope;
    out.backward = rev.forward;
    out.residual = rev.residual;
    out.monotone = rev.monotone;
    out.horizon_used = rev.horizon_used;
    return out;
}

StableData stable_data(const CurvatureProfile& profile, Interval window, const LimitConfig& limit,
                       const IntegratorConfig& cfg) {
    StableData out = stable_solution(profile, window, limit, cfg);
    StableData un = unstable_solution(profile, window, limit, cfg);
    out.dbar = std::move(un.dbar);
    out.dbar_slope = un.dbar_slope;
    out.backward = std::move(un.backward);
    out.gap = out.dbar_slope - out.d_slope;
    out.residual = std::max(out.residual, un.residual);
    out.monotone = out.monotone && un.monotone;
    out.horizon_used = std::min(out.horizon_used, un.horizon_used);
    return out;
}

ConjugateReport conjugate_points(const CurvatureProfile& profile, Interval window, const IntegratorConfig& cfg) {
    require_origin(window);
    const ScalarSolution a = solve_a(profile, window, cfg);
    const auto fn = [&a](double s) { return a.f(s); };
    ConjugateReport report;
    constexpr double grid = 1e-2;

    auto scan = [&](double end, double dir) {
        double prev_s = 0.0;
        double prev_sign = dir;  // a(s) ~ s near 0
        const long steps = static_cast<long>(std::ceil(std::abs(end) / grid));
        for (long i = 1; i <= steps; ++i) {
            const double s = i == steps ? end : dir * grid * static_cast<double>(i);
            const double v = a.f(s);
            if (v == 0.0) continue;
            const double sign = v > 0.0 ? 1.0 : -1.0;
            if (sign != prev_sign) {
                Bracket br = bisect_sign_change(fn, std::min(prev_s, s), std::max(prev_s, s), 1e-8);
                report.zeros.push_back(br);
                prev_sign = sign;
            }
            prev_s = s;
        }
    };
    if (window.lo < 0.0) scan(window.lo, -1.0);
    std::reverse(report.zeros.begin(), report.zeros.end());
    if (window.hi > 0.0) scan(window.hi, 1.0);
    report.ok = report.zeros.empty();
    return report;
}

FocalReport focal_monotonicity(const CurvatureProfile& profile, Interval window, const IntegratorConfig& cfg) {
    FocalReport report;
    if (!(window.hi > 0.0)) return report;
    const ScalarSolution a = integrate_jacobi(profile, 0.0, 0.0, 1.0, {0.0, window.hi}, cfg);
    constexpr double grid = 1e-3;
    const long steps = static_cast<long>(std::ceil(window.hi / grid));
    for (long i = 1; i <= steps; ++i) {
        const double s = i == steps ? window.hi : grid * static_cast<double>(i);
        const auto [v, dv] = a.eval(s);
        // d|a|/ds = sign(a) a'
        const double slope = v >= 0.0 ? dv : -dv;
        if (v <= 0.0 || slope < -1e-9) {
            report.ok = false;
            report.first_failure = s;
            break;
        }
    }
    return report;
}

}  // namespace anosov
