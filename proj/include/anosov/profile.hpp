#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "anosov/expression.hpp"

namespace anosov {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    bool contains(double s, double slack = 0.0) const { return s >= lo - slack && s <= hi + slack; }
    bool contains(const Interval& other) const { return other.lo >= lo && other.hi <= hi; }
};

/// Gaussian curvature along a unit-speed geodesic, parameterized by arc length.
///
/// `lower_bound_k` is the declared k with kappa(s) > -k^2 on the whole domain.
struct CurvatureProfile {
    std::function<double(double)> eval;
    double lower_bound_k = 0.0;
    Interval domain{-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    std::string description;

    double operator()(double s) const { return eval(s); }
};

/// Checked evaluation; throws DomainError outside the profile domain.
double eval_curvature(const CurvatureProfile& profile, double s);

CurvatureProfile constant_profile(double kappa, Interval domain = {-1e3, 1e3});

/// Profile from an expression in `s`. When `k` is negative it is estimated as
/// sqrt(max(0, -min kappa)) * 1.05 over `k_window` (or the domain if that is finite).
CurvatureProfile expression_profile(const Expression& expr, Interval domain = {-1e3, 1e3}, double k = -1.0);
CurvatureProfile expression_profile(const std::string& text, Interval domain = {-1e3, 1e3}, double k = -1.0);

/// kappa_tau(s) = kappa(s + tau).
CurvatureProfile shifted(const CurvatureProfile& profile, double tau);

/// kappa(-s): the curvature seen along the reversed geodesic.
CurvatureProfile reversed(const CurvatureProfile& profile);

/// sqrt(max(0, -min kappa)) * 1.05 over `window`, sampled at `step`.
double estimate_lower_bound_k(const std::function<double(double)>& kappa, Interval window, double step = 1e-3);

/// Minimum of kappa over a uniform grid, with its location.
struct CurvatureExtremum {
    double value;
    double s;
};
CurvatureExtremum min_curvature(const CurvatureProfile& profile, Interval window, double step = 1e-3);
CurvatureExtremum max_abs_curvature(const CurvatureProfile& profile, Interval window, double step = 1e-3);

}  // namespace anosov
