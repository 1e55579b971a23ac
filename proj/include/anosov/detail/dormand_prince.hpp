#pragma once

// Dormand-Prince 5(4) stepping over a fixed-size state, shared by the Jacobi, Riccati and
// geodesic integrators.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "anosov/errors.hpp"
#include "anosov/ode.hpp"

namespace anosov::detail {

template <std::size_t M>
using State = std::array<double, M>;

enum class StepVerdict { Continue, StopKeep, StopDiscard };

template <std::size_t M>
struct Path {
    std::vector<double> s;
    std::vector<State<M>> y;
    std::vector<State<M>> dy;
    bool stopped = false;  ///< the step callback ended the integration early
};

namespace tableau {
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b - b_hat
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                        e6 = 22.0 / 525, e7 = -1.0 / 40;
}  // namespace tableau

/// Integrates y' = rhs(s, y) from s0 to s_end (either direction). `on_step(s, y)` runs after each
/// accepted step and may stop the integration. Throws IntegrationError on step-size underflow.
template <std::size_t M, class Rhs, class OnStep>
Path<M> integrate(Rhs&& rhs, double s0, const State<M>& y0, double s_end, const IntegratorConfig& cfg,
                  OnStep&& on_step) {
    using namespace tableau;
    Path<M> path;
    State<M> y = y0;
    State<M> k1 = rhs(s0, y);
    path.s.push_back(s0);
    path.y.push_back(y);
    path.dy.push_back(k1);
    if (s_end == s0) return path;

    const double dir = s_end > s0 ? 1.0 : -1.0;
    const bool fixed = cfg.method == StepMethod::FixedStep;
    double h = std::min({cfg.max_step, std::abs(s_end - s0), fixed ? cfg.max_step : 1e-2});
    double s = s0;
    double err_prev = 1e-4;

    auto axpy = [](const State<M>& base, double h_, std::initializer_list<std::pair<double, const State<M>*>> terms) {
        State<M> out = base;
        for (const auto& [c, k] : terms) {
            for (std::size_t i = 0; i < M; ++i) out[i] += h_ * c * (*k)[i];
        }
        return out;
    };

    while (dir * (s_end - s) > 0.0) {
        bool last = false;
        if (h >= std::abs(s_end - s)) {
            h = std::abs(s_end - s);
            last = true;
        }
        const double hs = dir * h;
        const State<M> k2 = rhs(s + c2 * hs, axpy(y, hs, {{a21, &k1}}));
        const State<M> k3 = rhs(s + c3 * hs, axpy(y, hs, {{a31, &k1}, {a32, &k2}}));
        const State<M> k4 = rhs(s + c4 * hs, axpy(y, hs, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
        const State<M> k5 = rhs(s + c5 * hs, axpy(y, hs, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
        const State<M> k6 =
            rhs(s + hs, axpy(y, hs, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
        const State<M> y_new = axpy(y, hs, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
        const double s_new = last ? s_end : s + hs;
        const State<M> k7 = rhs(s_new, y_new);

        double err = 0.0;
        bool finite = true;
        for (std::size_t i = 0; i < M; ++i) {
            const double ei = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double scale = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
            err += (ei / scale) * (ei / scale);
            if (!std::isfinite(y_new[i]) || !std::isfinite(k7[i])) finite = false;
        }
        err = std::sqrt(err / static_cast<double>(M));
        if (!std::isfinite(err)) finite = false;

        if (fixed) {
            if (!finite) {
                throw IntegrationError("non-finite state in fixed-step integration", std::min(s0, s),
                                       std::max(s0, s));
            }
        } else if (!finite || err > 1.0) {
            // Reject.
            const double factor = finite ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.25;
            h *= factor;
            if (h < cfg.min_step) {
                throw IntegrationError("step size underflow", std::min(s0, s), std::max(s0, s));
            }
            continue;
        }

        const StepVerdict verdict = on_step(s_new, y_new);
        if (verdict == StepVerdict::StopDiscard) {
            path.stopped = true;
            return path;
        }
        s = s_new;
        y = y_new;
        k1 = k7;
        path.s.push_back(s);
        path.y.push_back(y);
        path.dy.push_back(k1);
        if (verdict == StepVerdict::StopKeep) {
            path.stopped = true;
            return path;
        }

        if (!fixed) {
            // PI step-size control.
            const double e = std::max(err, 1e-10);
            double factor = 0.9 * std::pow(e, -0.7 / 5.0) * std::pow(err_prev, 0.4 / 5.0);
            factor = std::clamp(factor, 0.2, 5.0);
            h = std::min(h * factor, cfg.max_step);
            err_prev = std::max(err, 1e-4);
        }
    }
    return path;
}

template <std::size_t M, class Rhs>
Path<M> integrate(Rhs&& rhs, double s0, const State<M>& y0, double s_end, const IntegratorConfig& cfg) {
    return integrate<M>(std::forward<Rhs>(rhs), s0, y0, s_end, cfg,
                        [](double, const State<M>&) { return StepVerdict::Continue; });
}

/// Quintic Hermite interpolant on [s0, s0 + h] matching value, first and second derivative at
/// both ends. Returns (value, derivative) at parameter t in [0, 1].
inline std::pair<double, double> quintic_hermite(double h, double t, double p0, double d0, double dd0, double p1,
                                                 double d1, double dd1) {
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
    const double h0 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
    const double h1 = t - 6 * t3 + 8 * t4 - 3 * t5;
    const double h2 = 0.5 * (t2 - 3 * t3 + 3 * t4 - t5);
    const double h3 = 10 * t3 - 15 * t4 + 6 * t5;
    const double h4 = -4 * t3 + 7 * t4 - 3 * t5;
    const double h5 = 0.5 * (t3 - 2 * t4 + t5);
    const double g0 = -30 * t2 + 60 * t3 - 30 * t4;
    const double g1 = 1 - 18 * t2 + 32 * t3 - 15 * t4;
    const double g2 = 0.5 * (2 * t - 9 * t2 + 12 * t3 - 5 * t4);
    const double g3 = -g0;
    const double g4 = -12 * t2 + 28 * t3 - 15 * t4;
    const double g5 = 0.5 * (3 * t2 - 8 * t3 + 5 * t4);
    const double value = p0 * h0 + h * d0 * h1 + h * h * dd0 * h2 + p1 * h3 + h * d1 * h4 + h * h * dd1 * h5;
    const double deriv = (p0 * g0 + p1 * g3) / h + d0 * g1 + d1 * g4 + h * (dd0 * g2 + dd1 * g5);
    return {value, deriv};
}

/// Cubic Hermite interpolant of value and slope; returns value at t in [0, 1].
inline double cubic_hermite(double h, double t, double p0, double d0, double p1, double d1) {
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * p0 + (t3 - 2 * t2 + t) * h * d0 + (-2 * t3 + 3 * t2) * p1 + (t3 - t2) * h * d1;
}

/// Index i with grid[i] <= s <= grid[i+1] for an ascending grid of size >= 2.
inline std::size_t segment_index(const std::vector<double>& grid, double s) {
    auto it = std::upper_bound(grid.begin(), grid.end(), s);
    std::size_t i = it == grid.begin() ? 0 : static_cast<std::size_t>(it - grid.begin()) - 1;
    return std::min(i, grid.size() - 2);
}

}  // namespace anosov::detail
