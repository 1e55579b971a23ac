#include "anosov/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "anosov/detail/dormand_prince.hpp"
#include "anosov/errors.hpp"
#include "anosov/rng.hpp"

namespace anosov {

ConformalChart::ConformalChart(Expression lambda, Rect domain, DerivativeMode mode, double fd_step,
                               std::string description)
    : lambda_(std::move(lambda)), domain_(domain), mode_(mode), fd_step_(fd_step), description_(std::move(description)) {
    if (!(domain_.x1 > domain_.x0) || !(domain_.y1 > domain_.y0)) throw DomainError("chart rectangle is empty");
    if (!(fd_step_ > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
    if (description_.empty()) description_ = "lambda(x,y) = " + lambda_.source();
    if (mode_ == DerivativeMode::Analytic) {
        Expression lx = lambda_.derivative(Var::X);
        Expression ly = lambda_.derivative(Var::Y);
        lxx_ = std::make_shared<const Expression>(lx.derivative(Var::X));
        lyy_ = std::make_shared<const Expression>(ly.derivative(Var::Y));
        lx_ = std::make_shared<const Expression>(std::move(lx));
        ly_ = std::make_shared<const Expression>(std::move(ly));
    }
}

ConformalChart ConformalChart::from_string(const std::string& lambda, Rect domain, DerivativeMode mode,
                                           double fd_step) {
    return ConformalChart(Expression::parse(lambda, {Var::X, Var::Y}), domain, mode, fd_step);
}

bool ConformalChart::valid_at(double x, double y) const {
    if (!domain_.interior(x, y)) return false;
    const double l = lambda_(x, y);
    return std::isfinite(l) && l > 0.0;
}

ConformalChart::LogDerivatives ConformalChart::log_derivatives(double x, double y) const {
    LogDerivatives out{};
    const VarValues at{0.0, x, y};
    out.lambda = lambda_.evaluate(at);
    if (mode_ == DerivativeMode::Analytic) {
        const double l = out.lambda;
        const double lx = lx_->evaluate(at), ly = ly_->evaluate(at);
        const double lxx = lxx_->evaluate(at), lyy = lyy_->evaluate(at);
        out.phi_x = lx / l;
        out.phi_y = ly / l;
        // Laplacian of log lambda = (lxx + lyy)/lambda - |grad lambda|^2 / lambda^2
        out.laplacian = (lxx + lyy) / l - (out.phi_x * out.phi_x + out.phi_y * out.phi_y);
    } else {
        const double h = fd_step_;
        const double p = std::log(out.lambda);
        const double pxp = std::log(lambda_(x + h, y)), pxm = std::log(lambda_(x - h, y));
        const double pyp = std::log(lambda_(x, y + h)), pym = std::log(lambda_(x, y - h));
        out.phi_x = (pxp - pxm) / (2.0 * h);
        out.phi_y = (pyp - pym) / (2.0 * h);
        out.laplacian = (pxp + pxm + pyp + pym - 4.0 * p) / (h * h);
    }
    return out;
}

double gaussian_curvature(const ConformalChart& chart, double x, double y) {
    if (!chart.domain().interior(x, y)) {
        std::ostringstream os;
        os << "point (" << x << ", " << y << ") is not interior to the chart rectangle";
        throw DomainError(os.str());
    }
    const auto d = chart.log_derivatives(x, y);
    if (!std::isfinite(d.lambda) || d.lambda <= 0.0) {
        std::ostringstream os;
        os << "conformal factor " << d.lambda << " at (" << x << ", " << y << ") is not positive";
        throw InvalidChartError(os.str());
    }
    const double kappa = -d.laplacian / (d.lambda * d.lambda);
    if (!std::isfinite(kappa)) throw InvalidChartError("curvature is not finite at the requested point");
    return kappa;
}

GeodesicTrace make_trace(const ConformalChart& chart, std::vector<TraceSample> samples, std::vector<double> ax,
                         std::vector<double> ay) {
    GeodesicTrace trace;
    trace.shared_ = std::make_shared<const std::vector<TraceSample>>(samples);
    trace.ax_ = std::make_shared<const std::vector<double>>(std::move(ax));
    trace.ay_ = std::make_shared<const std::vector<double>>(std::move(ay));
    trace.samples = std::move(samples);

    CurvatureProfile& p = trace.kappa_profile;
    p.domain = trace.interval();
    p.description = "geodesic of " + chart.description();
    auto data = trace.shared_;
    auto ax_data = trace.ax_;
    auto ay_data = trace.ay_;
    auto chart_copy = std::make_shared<const ConformalChart>(chart);
    p.eval = [data, ax_data, ay_data, chart_copy](double s) {
        const auto& n = *data;
        auto it = std::upper_bound(n.begin(), n.end(), s, [](double v, const TraceSample& t) { return v < t.s; });
        std::size_t i = it == n.begin() ? 0 : static_cast<std::size_t>(it - n.begin()) - 1;
        i = std::min(i, n.size() - 2);
        const double h = n[i + 1].s - n[i].s;
        const double t = std::clamp((s - n[i].s) / h, 0.0, 1.0);
        const double x =
            detail::quintic_hermite(h, t, n[i].x, n[i].vx, (*ax_data)[i], n[i + 1].x, n[i + 1].vx, (*ax_data)[i + 1])
                .first;
        const double y =
            detail::quintic_hermite(h, t, n[i].y, n[i].vy, (*ay_data)[i], n[i + 1].y, n[i + 1].vy, (*ay_data)[i + 1])
                .first;
        return gaussian_curvature(*chart_copy, x, y);
    };
    if (trace.samples.size() >= 2) {
        double lo = 0.0;
        for (const auto& smp : trace.samples) lo = std::min(lo, gaussian_curvature(chart, smp.x, smp.y));
        p.lower_bound_k = std::sqrt(std::max(0.0, -lo)) * 1.05;
    }
    return trace;
}

TraceSample GeodesicTrace::at(double s) const {
    const auto& n = *shared_;
    if (s < n.front().s || s > n.back().s) throw DomainError("arc length outside the traced interval");
    auto it = std::upper_bound(n.begin(), n.end(), s, [](double v, const TraceSample& t) { return v < t.s; });
    std::size_t i = it == n.begin() ? 0 : static_cast<std::size_t>(it - n.begin()) - 1;
    i = std::min(i, n.size() - 2);
    const double h = n[i + 1].s - n[i].s;
    const double t = (s - n[i].s) / h;
    const auto [x, vx] =
        detail::quintic_hermite(h, t, n[i].x, n[i].vx, (*ax_)[i], n[i + 1].x, n[i + 1].vx, (*ax_)[i + 1]);
    const auto [y, vy] =
        detail::quintic_hermite(h, t, n[i].y, n[i].vy, (*ay_)[i], n[i + 1].y, n[i + 1].vy, (*ay_)[i + 1]);
    return {s, x, y, vx, vy};
}

namespace {

struct OneSided {
    detail::Path<4> path;
    bool left_chart = false;
};

OneSided trace_one_side(const ConformalChart& chart, Point2 p0, Point2 v0, double horizon,
                        const IntegratorConfig& cfg) {
    auto rhs = [&chart](double, const detail::State<4>& q) {
        if (!chart.valid_at(q[0], q[1])) return detail::State<4>{q[2], q[3], 0.0, 0.0};
        const auto d = chart.log_derivatives(q[0], q[1]);
        const double vx = q[2], vy = q[3];
        const double ax = -d.phi_x * (vx * vx - vy * vy) - 2.0 * d.phi_y * vx * vy;
        const double ay = -d.phi_y * (vy * vy - vx * vx) - 2.0 * d.phi_x * vx * vy;
        return detail::State<4>{vx, vy, ax, ay};
    };
    auto on_step = [&chart](double, const detail::State<4>& q) {
        return chart.valid_at(q[0], q[1]) ? detail::StepVerdict::Continue : detail::StepVerdict::StopDiscard;
    };
    OneSided out;
    out.path = detail::integrate<4>(rhs, 0.0, detail::State<4>{p0.x, p0.y, v0.x, v0.y}, horizon, cfg, on_step);
    out.left_chart = out.path.stopped;
    return out;
}

void check_start(const ConformalChart& chart, Point2 p0, Point2 v0) {
    if (!chart.valid_at(p0.x, p0.y)) throw DomainError("geodesic base point is not interior to the chart");
    const double speed = chart.lambda(p0.x, p0.y) * std::hypot(v0.x, v0.y);
    if (std::abs(speed - 1.0) > 1e-9) {
        std::ostringstream os;
        os << "initial velocity has metric norm " << speed << ", expected 1";
        throw DomainError(os.str());
    }
}

}  // namespace

GeodesicTrace geodesic_trace_two_sided(const ConformalChart& chart, Point2 p0, Point2 v0, double backward,
                                       double forward, const IntegratorConfig& cfg) {
    cfg.validate();
    check_start(chart, p0, v0);
    std::vector<TraceSample> samples;
    std::vector<double> ax, ay;
    bool left_back = false;
    if (backward > 0.0) {
        auto back = trace_one_side(chart, p0, {-v0.x, -v0.y}, backward, cfg);
        left_back = back.left_chart;
        const auto& p = back.path;
        for (std::size_t i = p.s.size(); i-- > 1;) {
            // Reversed parameterization: s -> -s flips velocities, keeps accelerations.
            samples.push_back({-p.s[i], p.y[i][0], p.y[i][1], -p.y[i][2], -p.y[i][3]});
            ax.push_back(p.dy[i][2]);
            ay.push_back(p.dy[i][3]);
        }
    }
    auto fwd = trace_one_side(chart, p0, v0, forward, cfg);
    const auto& p = fwd.path;
    for (std::size_t i = 0; i < p.s.size(); ++i) {
        samples.push_back({p.s[i], p.y[i][0], p.y[i][1], p.y[i][2], p.y[i][3]});
        ax.push_back(p.dy[i][2]);
        ay.push_back(p.dy[i][3]);
    }
    if (samples.size() < 2) throw DomainError("geodesic leaves the chart immediately");
    GeodesicTrace trace = make_trace(chart, std::move(samples), std::move(ax), std::move(ay));
    trace.exit_reason = fwd.left_chart ? ExitReason::LeftChartDomain : ExitReason::ReachedHorizon;
    trace.exit_reason_backward = left_back ? ExitReason::LeftChartDomain : ExitReason::ReachedHorizon;
    return trace;
}

GeodesicTrace geodesic_trace(const ConformalChart& chart, Point2 p0, Point2 v0, double horizon,
                             const IntegratorConfig& cfg) {
    return geodesic_trace_two_sided(chart, p0, v0, 0.0, horizon, cfg);
}

std::vector<UnitTangent> sample_unit_tangents(const ConformalChart& chart, int count, std::uint64_t seed) {
    return sample_unit_tangents(chart, count, seed, chart.domain());
}

std::vector<UnitTangent> sample_unit_tangents(const ConformalChart& chart, int count, std::uint64_t seed,
                                              const Rect& box) {
    if (count < 1) throw std::invalid_argument("sample count must be at least 1");
    Rng rng(seed);
    std::vector<UnitTangent> out;
    out.reserve(static_cast<std::size_t>(count));
    const long max_attempts = 1000L * count;
    long attempts = 0;
    while (static_cast<int>(out.size()) < count) {
        if (++attempts > max_attempts) throw DomainError("chart has no valid interior points in the sampling box");
        const double x = rng.uniform(box.x0, box.x1);
        const double y = rng.uniform(box.y0, box.y1);
        const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
        if (!chart.valid_at(x, y)) continue;
        const double l = chart.lambda(x, y);
        out.push_back({{x, y}, {std::cos(theta) / l, std::sin(theta) / l}});
    }
    return out;
}

}  // namespace anosov
