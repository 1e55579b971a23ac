#pragma once

// Independent reference computations used by the tests. Nothing here calls the library's
// integrators, limit construction or curvature code.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

using Fn = std::function<double(double)>;

struct State {
    double f;
    double fp;
};

/// Classical RK4 for f'' + kappa f = 0 from s0 to s1 with about |s1 - s0| / h steps.
inline State rk4_jacobi(const Fn& kappa, double s0, State y, double s1, double h = 1e-3) {
    const double span = s1 - s0;
    if (span == 0.0) return y;
    const long n = std::max(1L, static_cast<long>(std::ceil(std::abs(span) / h)));
    const double dt = span / static_cast<double>(n);
    double s = s0;
    for (long i = 0; i < n; ++i) {
        const auto rhs = [&](double t, State u) { return State{u.fp, -kappa(t) * u.f}; };
        const State k1 = rhs(s, y);
        const State k2 = rhs(s + dt / 2, {y.f + dt / 2 * k1.f, y.fp + dt / 2 * k1.fp});
        const State k3 = rhs(s + dt / 2, {y.f + dt / 2 * k2.f, y.fp + dt / 2 * k2.fp});
        const State k4 = rhs(s + dt, {y.f + dt * k3.f, y.fp + dt * k3.fp});
        y.f += dt / 6 * (k1.f + 2 * k2.f + 2 * k3.f + k4.f);
        y.fp += dt / 6 * (k1.fp + 2 * k2.fp + 2 * k3.fp + k4.fp);
        s = s0 + dt * static_cast<double>(i + 1);
    }
    return y;
}

/// RK4 trajectory on a uniform grid, f and f' at every step.
inline std::vector<std::pair<double, State>> rk4_path(const Fn& kappa, double s0, State y, double s1, double h) {
    std::vector<std::pair<double, State>> out{{s0, y}};
    const long n = std::max(1L, static_cast<long>(std::llround(std::abs(s1 - s0) / h)));
    const double dt = (s1 - s0) / static_cast<double>(n);
    for (long i = 0; i < n; ++i) {
        const double s = s0 + dt * static_cast<double>(i);
        y = rk4_jacobi(kappa, s, y, s + dt, std::abs(dt));
        out.push_back({s + dt, y});
    }
    return out;
}

/// d_T'(0) = -b(T)/a(T) by RK4.
inline double dt_slope(const Fn& kappa, double T, double h = 1e-3) {
    const State a = rk4_jacobi(kappa, 0.0, {0.0, 1.0}, T, h);
    const State b = rk4_jacobi(kappa, 0.0, {1.0, 0.0}, T, h);
    return -b.f / a.f;
}

namespace detail {
inline double simpson(const Fn& f, double a, double fa, double b, double fb, double m, double fm, double whole,
                      double tol, int depth) {
    const double lm = (a + m) / 2, rm = (m + b) / 2;
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6 * (fa + 4 * flm + fm);
    const double right = (b - m) / 6 * (fm + 4 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15 * tol) return left + right + (left + right - whole) / 15;
    return simpson(f, a, fa, m, fm, lm, flm, left, tol / 2, depth - 1) +
           simpson(f, m, fm, b, fb, rm, frm, right, tol / 2, depth - 1);
}
}  // namespace detail

/// Adaptive Simpson quadrature.
inline double adaptive_simpson(const Fn& f, double a, double b, double tol = 1e-12, int depth = 50) {
    const double fa = f(a), fb = f(b), m = (a + b) / 2, fm = f(m);
    return detail::simpson(f, a, fa, b, fb, m, fm, (b - a) / 6 * (fa + 4 * fm + fb), tol, depth);
}

/// kappa = -Laplacian(log lambda) / lambda^2 with a fourth-order central stencil.
inline double fd_gaussian_curvature(const std::function<double(double, double)>& lambda, double x, double y,
                                    double h = 1e-3) {
    const auto L = [&](double px, double py) { return std::log(lambda(px, py)); };
    const auto d2 = [&](double dx, double dy) {
        return (-L(x + 2 * dx, y + 2 * dy) + 16 * L(x + dx, y + dy) - 30 * L(x, y) + 16 * L(x - dx, y - dy) -
                L(x - 2 * dx, y - 2 * dy)) /
               (12 * h * h);
    };
    const double lap = d2(h, 0.0) + d2(0.0, h);
    const double lam = lambda(x, y);
    return -lap / (lam * lam);
}

/// Seeded curvature profile with its expression text. Shapes:
///   negative: -c0 - c1 (1 + sin(w s + p)) / 2          (kappa <= -c0)
///   mixed:    c0 sin(w s + p) - c1                      (sign changes allowed)
struct RandomProfile {
    std::string text;
    Fn kappa;
    double min_kappa;
};

inline RandomProfile negative_profile(std::mt19937_64& gen, double kappa_max = -0.05) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const double c0 = -kappa_max + 0.95 * U(gen);
    const double c1 = 0.9 * U(gen);
    const double w = 0.3 + 1.7 * U(gen);
    const double p = 6.283185307179586 * U(gen);
    RandomProfile r;
    char buf[256];
    std::snprintf(buf, sizeof buf, "-%.17g - %.17g*(1 + sin(%.17g*s + %.17g))/2", c0, c1, w, p);
    r.text = buf;
    r.kappa = [=](double s) { return -c0 - c1 * (1 + std::sin(w * s + p)) / 2; };
    r.min_kappa = -c0 - c1;
    return r;
}

inline RandomProfile oscillating_profile(std::mt19937_64& gen) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const double c0 = 0.2 + 0.8 * U(gen);
    const double c1 = 0.5 * U(gen);
    const double w = 0.5 + 1.5 * U(gen);
    const double p = 6.283185307179586 * U(gen);
    RandomProfile r;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%.17g*sin(%.17g*s + %.17g) - %.17g", c0, w, p, c1);
    r.text = buf;
    r.kappa = [=](double s) { return c0 * std::sin(w * s + p) - c1; };
    r.min_kappa = -c0 - c1;
    return r;
}

}  // namespace oracle
