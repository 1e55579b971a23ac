#include "anosov/ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "anosov/detail/dormand_prince.hpp"

namespace anosov {

namespace {

double boundary_slack(double end) { return 1e-12 * std::max(1.0, std::abs(end)); }

void require_inside(const CurvatureProfile& profile, Interval target) {
    if (!profile.domain.contains(target)) {
        std::ostringstream os;
        os << "interval [" << target.lo << ", " << target.hi << "] not inside profile domain [" << profile.domain.lo
           << ", " << profile.domain.hi << "]";
        throw DomainError(os.str());
    }
}

}  // namespace

void IntegratorConfig::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw std::invalid_argument("integrator tolerances must be positive");
    if (!(min_step > 0.0) || !(min_step < max_step)) {
        throw std::invalid_argument("integrator steps must satisfy 0 < min_step < max_step");
    }
}

ScalarSolution::ScalarSolution(std::vector<JacobiNode> nodes)
    : nodes_(std::make_shared<const std::vector<JacobiNode>>(std::move(nodes))) {
    if (nodes_->size() < 2) throw std::invalid_argument("a scalar solution needs at least two nodes");
}

Interval ScalarSolution::interval() const {
    if (empty()) return {0.0, 0.0};
    return {nodes_->front().s, nodes_->back().s};
}

std::span<const JacobiNode> ScalarSolution::nodes() const {
    if (!nodes_) return {};
    return {nodes_->data(), nodes_->size()};
}

std::pair<double, double> ScalarSolution::eval(double s) const {
    if (empty()) throw DomainError("evaluation of an empty solution");
    const auto& n = *nodes_;
    const double lo = n.front().s, hi = n.back().s;
    if (s < lo || s > hi) {
        if (s < lo && lo - s <= boundary_slack(lo)) {
            s = lo;
        } else if (s > hi && s - hi <= boundary_slack(hi)) {
            s = hi;
        } else {
            std::ostringstream os;
            os << "s = " << s << " outside solution interval [" << lo << ", " << hi << "]";
            throw DomainError(os.str());
        }
    }
    auto it = std::upper_bound(n.begin(), n.end(), s, [](double v, const JacobiNode& node) { return v < node.s; });
    std::size_t i = it == n.begin() ? 0 : static_cast<std::size_t>(it - n.begin()) - 1;
    i = std::min(i, n.size() - 2);
    const JacobiNode& a = n[i];
    const JacobiNode& b = n[i + 1];
    const double h = b.s - a.s;
    const double t = (s - a.s) / h;
    return detail::quintic_hermite(h, t, a.f, a.fp, a.fpp, b.f, b.fp, b.fpp);
}

ScalarSolution ScalarSolution::scaled(double c) const {
    std::vector<JacobiNode> out(nodes_->begin(), nodes_->end());
    for (auto& node : out) {
        node.f *= c;
        node.fp *= c;
        node.fpp *= c;
    }
    return ScalarSolution(std::move(out));
}

ScalarSolution integrate_jacobi(const CurvatureProfile& profile, double s0, double f0, double fp0, Interval target,
                                const IntegratorConfig& cfg) {
    cfg.validate();
    require_inside(profile, target);
    if (!target.contains(s0)) throw DomainError("initial point outside the target interval");
    if (!(target.hi > target.lo)) throw DomainError("target interval is empty");

    const auto& kappa = profile.eval;
    auto rhs = [&kappa](double s, const detail::State<2>& y) {
        return detail::State<2>{y[1], -kappa(s) * y[0]};
    };
    const detail::State<2> y0{f0, fp0};
    std::vector<JacobiNode> nodes;
    if (s0 > target.lo) {
        auto back = detail::integrate<2>(rhs, s0, y0, target.lo, cfg);
        for (std::size_t i = back.s.size(); i-- > 1;) {
            nodes.push_back({back.s[i], back.y[i][0], back.y[i][1], back.dy[i][1]});
        }
    }
    auto fwd = detail::integrate<2>(rhs, s0, y0, target.hi, cfg);
    for (std::size_t i = 0; i < fwd.s.size(); ++i) {
        nodes.push_back({fwd.s[i], fwd.y[i][0], fwd.y[i][1], fwd.dy[i][1]});
    }
    return ScalarSolution(std::move(nodes));
}

double wronskian(const ScalarSolution& f, const ScalarSolution& g, double s) {
    const Interval a = f.interval(), b = g.interval();
    const Interval common{std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
    if (common.lo > common.hi) throw DomainError("solutions have disjoint intervals");
    const auto [fv, fd] = f.eval(s);
    const auto [gv, gd] = g.eval(s);
    return fd * gv - fv * gd;
}

Bracket bisect_sign_change(const std::function<double(double)>& fn, double lo, double hi, double width) {
    double flo = fn(lo);
    if (flo == 0.0) return {lo, lo};
    for (int iter = 0; iter < 200 && hi - lo > width; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double fm = fn(mid);
        if (fm == 0.0) return {mid, mid};
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return {lo, hi};
}

double RiccatiSolution::u(double s) const {
    if (!interval.contains(s, boundary_slack(std::max(std::abs(interval.lo), std::abs(interval.hi))))) {
        std::ostringstream os;
        os << "s = " << s << " outside Riccati interval [" << interval.lo << ", " << interval.hi << "]";
        throw DomainError(os.str());
    }
    return u_fn(std::clamp(s, interval.lo, interval.hi));
}

namespace {

struct RiccatiNodes {
    std::vector<double> s;
    std::vector<double> u;
    std::vector<double> up;
};

// A pole of u = f'/f is a zero of f. Near the escape point, solve (J) from (1, u) and bisect.
Bracket locate_pole(const CurvatureProfile& profile, double s_c, double u_c, const IntegratorConfig& cfg) {
    const double reach = 4.0 / std::abs(u_c);
    const double dir = u_c < 0.0 ? 1.0 : -1.0;
    const double s_far = std::clamp(s_c + dir * reach, profile.domain.lo, profile.domain.hi);
    Interval span{std::min(s_c, s_far), std::max(s_c, s_far)};
    if (span.length() <= 0.0) return {s_c, s_c};
    IntegratorConfig fine = cfg;
    fine.max_step = std::max(std::min(cfg.max_step, span.length() / 16.0), fine.min_step * 2.0);
    const ScalarSolution f = integrate_jacobi(profile, s_c, 1.0, u_c, span, fine);
    const auto fn = [&f](double s) { return f.f(s); };
    if ((f.f(span.lo) < 0.0) == (f.f(span.hi) < 0.0)) {
        const double guess = s_c - 1.0 / u_c;
        return {std::min(s_c, guess), std::max(s_c, guess)};
    }
    return bisect_sign_change(fn, span.lo, span.hi, 1e-9);
}

}  // namespace

RiccatiSolution integrate_riccati(const CurvatureProfile& profile, double s0, double u0, Interval target, double cap,
                                  const IntegratorConfig& cfg) {
    cfg.validate();
    if (!(cap > 0.0)) throw std::invalid_argument("Riccati cap must be positive");
    require_inside(profile, target);
    if (!target.contains(s0)) throw DomainError("initial point outside the target interval");

    const auto& kappa = profile.eval;
    auto rhs = [&kappa](double s, const detail::State<1>& y) {
        return detail::State<1>{-y[0] * y[0] - kappa(s)};
    };
    auto on_step = [cap](double, const detail::State<1>& y) {
        return std::abs(y[0]) > cap ? detail::StepVerdict::StopKeep : detail::StepVerdict::Continue;
    };

    RiccatiSolution out;
    auto nodes = std::make_shared<RiccatiNodes>();

    auto make_blow_up = [&](const detail::Path<1>& path) -> std::optional<BlowUp> {
        if (!path.stopped) return std::nullopt;
        const double s_c = path.s.back();
        const double u_c = path.y.back()[0];
        BlowUp b;
        b.s_escape = s_c;
        b.direction = u_c < 0.0 ? BlowUpDirection::Downward : BlowUpDirection::Upward;
        b.pole = locate_pole(profile, s_c, u_c, cfg);
        return b;
    };

    // Cubic Hermite dense output needs shorter steps than the quintic Jacobi interpolant.
    IntegratorConfig rc = cfg;
    rc.max_step = std::max(std::min(cfg.max_step, 0.01), 2.0 * cfg.min_step);
    const detail::State<1> y0{u0};
    if (s0 > target.lo) {
        auto back = detail::integrate<1>(rhs, s0, y0, target.lo, rc, on_step);
        out.blow_up_backward = make_blow_up(back);
        for (std::size_t i = back.s.size(); i-- > 1;) {
            nodes->s.push_back(back.s[i]);
            nodes->u.push_back(back.y[i][0]);
            nodes->up.push_back(back.dy[i][0]);
        }
    }
    auto fwd = detail::integrate<1>(rhs, s0, y0, target.hi, rc, on_step);
    out.blow_up = make_blow_up(fwd);
    for (std::size_t i = 0; i < fwd.s.size(); ++i) {
        nodes->s.push_back(fwd.s[i]);
        nodes->u.push_back(fwd.y[i][0]);
        nodes->up.push_back(fwd.dy[i][0]);
    }
    out.interval = {nodes->s.front(), nodes->s.back()};
    if (nodes->s.size() < 2) {
        const double value = nodes->u.front();
        out.u_fn = [value](double) { return value; };
        return out;
    }
    out.u_fn = [nodes](double s) {
        const std::size_t i = detail::segment_index(nodes->s, s);
        const double h = nodes->s[i + 1] - nodes->s[i];
        const double t = (s - nodes->s[i]) / h;
        return detail::cubic_hermite(h, t, nodes->u[i], nodes->up[i], nodes->u[i + 1], nodes->up[i + 1]);
    };
    return out;
}

}  // namespace anosov
