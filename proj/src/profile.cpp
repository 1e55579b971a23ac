#include "anosov/profile.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "anosov/errors.hpp"

namespace anosov {

double eval_curvature(const CurvatureProfile& profile, double s) {
    if (!profile.domain.contains(s)) {
        std::ostringstream os;
        os << "s = " << s << " outside profile domain [" << profile.domain.lo << ", " << profile.domain.hi << "]";
        throw DomainError(os.str());
    }
    return profile.eval(s);
}

CurvatureProfile constant_profile(double kappa, Interval domain) {
    CurvatureProfile p;
    p.eval = [kappa](double) { return kappa; };
    p.lower_bound_k = std::sqrt(std::max(0.0, -kappa));
    p.domain = domain;
    std::ostringstream os;
    os << "kappa = " << kappa;
    p.description = os.str();
    return p;
}

double estimate_lower_bound_k(const std::function<double(double)>& kappa, Interval window, double step) {
    double lo = kappa(window.lo);
    const auto n = static_cast<long>(std::ceil(window.length() / step));
    for (long i = 1; i <= n; ++i) {
        lo = std::min(lo, kappa(std::min(window.lo + static_cast<double>(i) * step, window.hi)));
    }
    return std::sqrt(std::max(0.0, -lo)) * 1.05;
}

CurvatureProfile expression_profile(const Expression& expr, Interval domain, double k) {
    CurvatureProfile p;
    p.eval = [expr](double s) { return expr(s); };
    p.domain = domain;
    p.description = "kappa(s) = " + expr.source();
    if (k >= 0.0) {
        p.lower_bound_k = k;
    } else if (expr.is_constant()) {
        p.lower_bound_k = std::sqrt(std::max(0.0, -expr(0.0)));
    } else {
        Interval w = domain;
        if (!std::isfinite(w.lo) || !std::isfinite(w.hi)) w = {-100.0, 100.0};
        p.lower_bound_k = estimate_lower_bound_k(p.eval, w);
    }
    return p;
}

CurvatureProfile expression_profile(const std::string& text, Interval domain, double k) {
    return expression_profile(Expression::parse(text, {Var::S}), domain, k);
}

CurvatureProfile shifted(const CurvatureProfile& profile, double tau) {
    CurvatureProfile p = profile;
    p.eval = [inner = profile.eval, tau](double s) { return inner(s + tau); };
    p.domain = {profile.domain.lo - tau, profile.domain.hi - tau};
    std::ostringstream os;
    os << profile.description << " shifted by " << tau;
    p.description = os.str();
    return p;
}

CurvatureProfile reversed(const CurvatureProfile& profile) {
    CurvatureProfile p = profile;
    p.eval = [inner = profile.eval](double s) { return inner(-s); };
    p.domain = {-profile.domain.hi, -profile.domain.lo};
    p.description = profile.description + " reversed";
    return p;
}

CurvatureExtremum min_curvature(const CurvatureProfile& profile, Interval window, double step) {
    CurvatureExtremum best{profile(window.lo), window.lo};
    const auto n = static_cast<long>(std::ceil(window.length() / step));
    for (long i = 1; i <= n; ++i) {
        const double s = std::min(window.lo + static_cast<double>(i) * step, window.hi);
        const double v = profile(s);
        if (v < best.value) best = {v, s};
    }
    return best;
}

CurvatureExtremum max_abs_curvature(const CurvatureProfile& profile, Interval window, double step) {
    CurvatureExtremum best{std::abs(profile(window.lo)), window.lo};
    const auto n = static_cast<long>(std::ceil(window.length() / step));
    for (long i = 1; i <= n; ++i) {
        const double s = std::min(window.lo + static_cast<double>(i) * step, window.hi);
        const double v = std::abs(profile(s));
        if (v > best.value) best = {v, s};
    }
    return best;
}

}  // namespace anosov
