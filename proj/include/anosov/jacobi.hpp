#pragma once

#include <optional>
#include <vector>

#include "anosov/errors.hpp"
#include "anosov/ode.hpp"
#include "anosov/profile.hpp"

namespace anosov {

/// Horizon schedule for the limits d = lim d_t (t -> +inf) and dbar = lim d_t (t -> -inf).
struct LimitConfig {
    double t_start = 8.0;
    double growth_factor = 2.0;
    double slope_tol = 1e-9;
};

/// a'' + kappa a = 0, a(0) = 0, a'(0) = 1.
ScalarSolution solve_a(const CurvatureProfile& profile, Interval window, const IntegratorConfig& cfg = {});

/// b'' + kappa b = 0, b(0) = 1, b'(0) = 0. W(b, a) = b'a - ba' = -1.
ScalarSolution solve_b(const CurvatureProfile& profile, Interval window, const IntegratorConfig& cfg = {});

/// The solution with d_t(0) = 1 and d_t(t) = 0, built as b - (b(t)/a(t)) a.
/// Throws ConjugatePointError when |a(t)| < 1e-12.
ScalarSolution solve_dt(const CurvatureProfile& profile, double t, Interval window, const IntegratorConfig& cfg = {});

/// d_t(s) through the quadrature a(s) * integral_s^t a(u)^-2 du, for 0 < s <= t or t <= s < 0.
double dt_by_quadrature(const ScalarSolution& a, double t, double s, double tol = 1e-12);

/// d_T'(0) over the horizon schedule.
struct SlopeSequence {
    std::vector<double> horizons;
    std::vector<double> raw;        ///< d_T'(0) = -b(T)/a(T)
    std::vector<double> corrected;  ///< d_T'(0) plus the tail integral of a^-2 past T under frozen curvature
    bool monotone = true;           ///< raw is nondecreasing in T within 1e-10
    double residual = 0.0;          ///< |corrected(2T) - corrected(T)| at convergence
    double converged_horizon = 0.0;
};

/// Runs the doubling schedule on [0, horizon]. Throws ConvergenceError when the window runs out.
SlopeSequence stable_slope_sequence(const CurvatureProfile& profile, double horizon, const LimitConfig& limit = {},
                                    const IntegratorConfig& cfg = {});

/// Stable (d) and unstable (dbar) solutions with d(0) = dbar(0) = 1.
struct StableData {
    ScalarSolution d;
    ScalarSolution dbar;
    double d_slope = 0.0;     ///< d'(0)
    double dbar_slope = 0.0;  ///< dbar'(0)
    double gap = 0.0;         ///< dbar'(0) - d'(0)
    double residual = 0.0;
    double horizon_used = 0.0;
    bool monotone = true;
    SlopeSequence forward;
    SlopeSequence backward;
};

/// Fills the d part. d on [0, hi] comes from integrating (J) backward from the window end with the
/// frozen-curvature decaying slope, normalized to d(0) = 1; the s < 0 part continues from (1, d'(0)).
StableData stable_solution(const CurvatureProfile& profile, Interval window, const LimitConfig& limit = {},
                           const IntegratorConfig& cfg = {});

/// Fills the dbar part: the stable solution of kappa(-s), reflected.
StableData unstable_solution(const CurvatureProfile& profile, Interval window, const LimitConfig& limit = {},
                             const IntegratorConfig& cfg = {});

/// Both parts plus the gap.
StableData stable_data(const CurvatureProfile& profile, Interval window, const LimitConfig& limit = {},
                       const IntegratorConfig& cfg = {});

struct ConjugateReport {
    std::vector<Bracket> zeros;  ///< zeros of a(s), s != 0, bracketed to width <= 1e-8
    bool ok = true;
};

ConjugateReport conjugate_points(const CurvatureProfile& profile, Interval window, const IntegratorConfig& cfg = {});

struct FocalReport {
    bool ok = true;
    std::optional<double> first_failure;
};

/// Whether |a(s)| is nondecreasing on (0, window.hi] (slope tolerance -1e-9, grid 1e-3).
FocalReport focal_monotonicity(const CurvatureProfile& profile, Interval window, const IntegratorConfig& cfg = {});

}  // namespace anosov
