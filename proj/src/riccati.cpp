#include "anosov/riccati.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <sstream>

namespace anosov {

namespace {

// Grid s_i = lo + i*step plus the endpoint.
template <class Fn>
void scan_grid(Interval iv, double step, Fn&& fn) {
    if (!(step > 0.0)) throw std::invalid_argument("grid step must be positive");
    const long n = static_cast<long>(std::floor(iv.length() / step + 1e-9));
    for (long i = 0; i <= n; ++i) fn(iv.lo + step * static_cast<double>(i));
    if (iv.lo + step * static_cast<double>(n) < iv.hi) fn(iv.hi);
}

struct Worst {
    double value = -std::numeric_limits<double>::infinity();
    double s = 0.0;

    void offer(double v, double s_) {
        if (std::isnan(v)) v = std::numeric_limits<double>::infinity();
        if (v > value) {
            value = v;
            s = s_;
        }
    }
};

BoundReport finish(std::string name, const Worst& w, Interval iv, GridOptions grid, std::string note = {}) {
    BoundReport r;
    r.bound_name = std::move(name);
    r.max_violation = w.value;
    r.worst_s = w.s;
    r.pass = w.value <= grid.tol;
    r.grid_step = grid.step;
    r.tol = grid.tol;
    r.interval = iv;
    r.note = std::move(note);
    return r;
}

double resolve_k(const CurvatureProfile& profile, double k) { return k < 0.0 ? profile.lower_bound_k : k; }

}  // namespace

double coth_envelope(double k, double s) {
    if (k == 0.0) return 1.0 / s;
    return k / std::tanh(k * s);
}

RiccatiSolution riccati_from_jacobi(const ScalarSolution& f, Interval interval) {
    const Interval dom = f.interval();
    if (!dom.contains(interval)) throw DomainError("interval outside the solution's range");
    const auto fn = [f](double s) { return f.f(s); };
    // Sign scan over the nodes inside the interval plus both ends.
    std::vector<double> pts{interval.lo};
    for (const auto& n : f.nodes()) {
        if (n.s > interval.lo && n.s < interval.hi) pts.push_back(n.s);
    }
    pts.push_back(interval.hi);
    // Also catch double zeros between nodes by a finer scan.
    std::vector<double> fine;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        for (int j = 0; j < 4; ++j) fine.push_back(pts[i] + (pts[i + 1] - pts[i]) * j / 4.0);
    }
    fine.push_back(interval.hi);
    double prev = fn(fine.front());
    for (std::size_t i = 0; i < fine.size(); ++i) {
        const double v = fn(fine[i]);
        if (v == 0.0 || (i > 0 && (v < 0.0) != (prev < 0.0))) {
            const Bracket br = v == 0.0 ? Bracket{fine[i], fine[i]} : bisect_sign_change(fn, fine[i - 1], fine[i], 1e-9);
            std::ostringstream os;
            os << "Jacobi solution vanishes in [" << br.first << ", " << br.second << "]: u = f'/f has a pole";
            throw PoleError(os.str(), br);
        }
        prev = v;
    }
    RiccatiSolution out;
    out.interval = interval;
    out.u_fn = [f](double s) {
        const auto [v, d] = f.eval(s);
        return d / v;
    };
    return out;
}

BoundReport verify_green_bound(const RiccatiSolution& u, double k, Interval interval, GridOptions grid) {
    Worst w;
    scan_grid(interval, grid.step, [&](double s) { w.offer(std::abs(u.u(s)) - k, s); });
    return finish("green", w, interval, grid, "on window only: the bound assumes u is defined on the whole line");
}

BoundReport verify_coth_bound(const RiccatiSolution& u, double k, Interval interval, GridOptions grid) {
    if (!(interval.lo > 0.0)) throw DomainError("coth bound needs an interval inside (0, inf)");
    Worst w;
    scan_grid(interval, grid.step, [&](double s) { w.offer(std::abs(u.u(s)) - coth_envelope(k, s), s); });
    return finish("coth", w, interval, grid);
}

BoundReport norm_derivative_bound(const CurvatureProfile& profile, Interval window, double k, double s_min,
                                  GridOptions grid, const IntegratorConfig& cfg) {
    k = resolve_k(profile, k);
    if (!(window.hi > s_min)) throw DomainError("window must extend past s_min");
    const ScalarSolution a = integrate_jacobi(profile, 0.0, 0.0, 1.0, {0.0, window.hi}, cfg);
    const Interval iv{s_min, window.hi};
    Worst w;
    scan_grid(iv, grid.step, [&](double s) {
        const auto [v, d] = a.eval(s);
        w.offer(std::abs(d) / std::abs(v) - coth_envelope(k, s), s);
    });
    return finish("norm_derivative", w, iv, grid, "ratio form |a'|/|a| - k coth(ks)");
}

double tail_mass(const CurvatureProfile& profile, double s, double horizon, const LimitConfig& limit,
                 const IntegratorConfig& cfg) {
    if (!(s > 0.0) || !(s < horizon)) throw DomainError("tail_mass needs 0 < s < horizon");
    const StableData st = stable_solution(profile, {0.0, horizon}, limit, cfg);
    const ScalarSolution a = integrate_jacobi(profile, 0.0, 0.0, 1.0, {0.0, s}, cfg);
    const ScalarSolution b = integrate_jacobi(profile, 0.0, 1.0, 0.0, {0.0, s}, cfg);
    const double as = a.f(s);
    if (std::abs(as) < 1e-12) throw ConjugatePointError("a vanishes at s", {{s, s}});
    return st.d_slope + b.f(s) / as;
}

GrowthReport growth_threshold(const CurvatureProfile& profile, double R, Interval window, double k,
                              double grid_step, const LimitConfig& limit, const IntegratorConfig& cfg) {
    if (!(R > 0.0)) throw std::invalid_argument("growth threshold needs R > 0");
    if (!(window.hi > 0.0)) throw DomainError("window must extend to positive s");
    k = resolve_k(profile, k);
    GrowthReport out;
    out.R = R;
    const ScalarSolution a = integrate_jacobi(profile, 0.0, 0.0, 1.0, {0.0, window.hi}, cfg);
    const ScalarSolution b = integrate_jacobi(profile, 0.0, 1.0, 0.0, {0.0, window.hi}, cfg);

    std::vector<double> grid;
    scan_grid({0.0, window.hi}, grid_step, [&](double s) { grid.push_back(s); });
    if (std::abs(a.f(grid.back())) < R) {
        out.T = std::numeric_limits<double>::infinity();
        out.conclusive = false;
    } else {
        std::size_t i = grid.size() - 1;
        while (i > 0 && std::abs(a.f(grid[i - 1])) >= R) --i;
        out.T = grid[i];
        out.conclusive = true;
    }

    if (k > 0.0) {
        try {
            const StableData st = stable_solution(profile, {0.0, window.hi}, limit, cfg);
            out.cross_checked = true;
            // The bound needs k coth(ks) <= 2k, i.e. s >= atanh(1/2)/k.
            const double s0 = std::atanh(0.5) / k;
            for (std::size_t i = 1; i < grid.size(); ++i) {
                const double s = grid[i];
                if (s < s0) continue;
                const double av = a.f(s);
                const double m = st.d_slope + b.f(s) / av;
                if (!(m > 1e-8)) continue;
                if (!out.sufficient_T && m <= 1.0 / (4.0 * k * R * R)) out.sufficient_T = s;
                const double need = 1.0 / std::sqrt(4.0 * k * m);
                if (std::abs(av) < need * (1.0 - 1e-6)) {
                    out.sufficient_condition_holds = false;
                    out.sufficient_condition_failure = s;
                    break;
                }
            }
        } catch (const ConvergenceError&) {
            out.cross_checked = false;
        }
    }
    return out;
}

BoundReport stable_slope_bound(const StableData& stable, double k, Interval window, GridOptions grid) {
    Worst w;
    auto check = [&](const ScalarSolution& f) {
        if (f.empty()) return;
        const Interval fi = f.interval();
        const Interval iv{std::max(window.lo, fi.lo), std::min(window.hi, fi.hi)};
        if (iv.lo > iv.hi) return;
        scan_grid(iv, grid.step, [&](double s) {
            const auto [v, d] = f.eval(s);
            w.offer(std::abs(d) / std::abs(v) - k, s);
        });
    };
    check(stable.d);
    check(stable.dbar);
    return finish("stable_slope", w, window, grid, "ratio form |f'|/|f| - k for f = d and dbar");
}

}  // namespace anosov
