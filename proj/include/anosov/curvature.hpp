#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "anosov/expression.hpp"
#include "anosov/ode.hpp"
#include "anosov/profile.hpp"

namespace anosov {

struct Rect {
    double x0 = -1.0, x1 = 1.0;
    double y0 = -1.0, y1 = 1.0;

    bool interior(double x, double y) const { return x > x0 && x < x1 && y > y0 && y < y1; }
};

enum class DerivativeMode { Analytic, FiniteDifference };

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

/// Conformal metric lambda(x, y)^2 (dx^2 + dy^2) on a rectangle.
///
/// The chart is valid where lambda is finite and positive; points of the rectangle where
/// that fails (e.g. outside the unit disk for the Poincare model) are treated as off-chart.
class ConformalChart {
public:
    ConformalChart(Expression lambda, Rect domain, DerivativeMode mode = DerivativeMode::Analytic,
                   double fd_step = 1e-5, std::string description = {});
    static ConformalChart from_string(const std::string& lambda, Rect domain,
                                      DerivativeMode mode = DerivativeMode::Analytic, double fd_step = 1e-5);

    double lambda(double x, double y) const { return lambda_(x, y); }
    bool valid_at(double x, double y) const;
    const Rect& domain() const noexcept { return domain_; }
    DerivativeMode mode() const noexcept { return mode_; }
    double fd_step() const noexcept { return fd_step_; }
    const std::string& description() const noexcept { return description_; }
    const Expression& lambda_expression() const noexcept { return lambda_; }

    /// Gradient and Laplacian of log lambda, without domain checks.
    struct LogDerivatives {
        double lambda;
        double phi_x, phi_y;
        double laplacian;
    };
    LogDerivatives log_derivatives(double x, double y) const;

private:
    Expression lambda_;
    Rect domain_;
    DerivativeMode mode_;
    double fd_step_;
    std::string description_;
    // Analytic partials of lambda, built once.
    std::shared_ptr<const Expression> lx_, ly_, lxx_, lyy_;
};

/// kappa = -Laplacian(log lambda) / lambda^2. Throws DomainError off the open rectangle and
/// InvalidChartError where lambda <= 0 or the result is not finite.
double gaussian_curvature(const ConformalChart& chart, double x, double y);

struct TraceSample {
    double s, x, y, vx, vy;
};

enum class ExitReason { ReachedHorizon, LeftChartDomain };

/// Unit-speed geodesic with its curvature profile. Samples are ascending in s; s may be
/// negative when the trace was extended backward.
struct GeodesicTrace {
    std::vector<TraceSample> samples;
    CurvatureProfile kappa_profile;
    ExitReason exit_reason = ExitReason::ReachedHorizon;
    ExitReason exit_reason_backward = ExitReason::ReachedHorizon;

    /// Dense position and velocity at arc length s.
    TraceSample at(double s) const;
    Interval interval() const { return {samples.front().s, samples.back().s}; }

private:
    friend GeodesicTrace make_trace(const ConformalChart&, std::vector<TraceSample>, std::vector<double>,
                                    std::vector<double>);
    std::shared_ptr<const std::vector<TraceSample>> shared_;
    std::shared_ptr<const std::vector<double>> ax_, ay_;
};

/// Traces the geodesic through p0 with unit metric velocity v0 for arc length `horizon`.
/// Leaving the chart stops the trace early with exit_reason = LeftChartDomain.
GeodesicTrace geodesic_trace(const ConformalChart& chart, Point2 p0, Point2 v0, double horizon,
                             const IntegratorConfig& cfg = {});

/// Traces both ways from p0: s in [-backward, forward] (shorter if the chart is left).
GeodesicTrace geodesic_trace_two_sided(const ConformalChart& chart, Point2 p0, Point2 v0, double backward,
                                       double forward, const IntegratorConfig& cfg = {});

struct UnitTangent {
    Point2 point;
    Point2 velocity;
};

/// Deterministic seeded base points (uniform in `box`, rejected where the chart is invalid)
/// with uniformly distributed unit-metric directions.
std::vector<UnitTangent> sample_unit_tangents(const ConformalChart& chart, int count, std::uint64_t seed);
std::vector<UnitTangent> sample_unit_tangents(const ConformalChart& chart, int count, std::uint64_t seed,
                                              const Rect& box);

}  // namespace anosov
