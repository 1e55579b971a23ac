#pragma once

#include <optional>
#include <string>

#include "anosov/jacobi.hpp"
#include "anosov/ode.hpp"
#include "anosov/profile.hpp"

namespace anosov {

struct BoundReport {
    std::string bound_name;
    double max_violation = 0.0;
    double worst_s = 0.0;
    bool pass = true;  ///< max_violation <= tol
    double grid_step = 1e-3;
    double tol = 1e-7;
    Interval interval;
    std::string note;
};

struct GridOptions {
    double step = 1e-3;
    double tol = 1e-7;
};

/// k coth(k s), with the k -> 0 limit 1/s.
double coth_envelope(double k, double s);

/// u = f'/f on `interval`. Throws PoleError bracketing a zero of f inside the interval.
RiccatiSolution riccati_from_jacobi(const ScalarSolution& f, Interval interval);

/// |u(s)| <= k on the interval. The lemma needs u on the whole line, so a pass only holds on the window.
BoundReport verify_green_bound(const RiccatiSolution& u, double k, Interval interval, GridOptions grid = {});

/// |u(s)| <= k coth(k s) for s in the interval, which must lie in (0, inf).
BoundReport verify_coth_bound(const RiccatiSolution& u, double k, Interval interval, GridOptions grid = {});

/// |a'(s)| <= k coth(k s) |a(s)| on [s_min, window.hi], checked as |a'|/|a| against the envelope.
/// k < 0 selects profile.lower_bound_k.
BoundReport norm_derivative_bound(const CurvatureProfile& profile, Interval window, double k = -1.0,
                                  double s_min = 0.01, GridOptions grid = {}, const IntegratorConfig& cfg = {});

/// m(s) = d'(0) - d_s'(0) for s > 0, with d'(0) from the stable construction on [0, horizon].
double tail_mass(const CurvatureProfile& profile, double s, double horizon, const LimitConfig& limit = {},
                 const IntegratorConfig& cfg = {});

struct GrowthReport {
    double T = 0.0;  ///< smallest grid point with |a(s)| >= R for every grid s >= T in the window
    bool conclusive = false;
    double R = 0.0;
    /// |a(s)| >= (4 k m(s))^{-1/2} for s >= atanh(1/2)/k, checked where m(s) > 1e-8.
    bool sufficient_condition_holds = true;
    std::optional<double> sufficient_condition_failure;
    /// First grid s >= atanh(1/2)/k with m(s) <= 1/(4 k R^2); the threshold argument guarantees T <= this.
    std::optional<double> sufficient_T;
    bool cross_checked = false;  ///< false when the stable slope could not be computed on the window
};

GrowthReport growth_threshold(const CurvatureProfile& profile, double R, Interval window, double k = -1.0,
                              double grid_step = 1e-3, const LimitConfig& limit = {},
                              const IntegratorConfig& cfg = {});

/// |d'(s)| <= k |d(s)| and |dbar'(s)| <= k |dbar(s)| on the window, checked in ratio form.
BoundReport stable_slope_bound(const StableData& stable, double k, Interval window, GridOptions grid = {});

}  // namespace anosov
