#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "anosov/errors.hpp"
#include "anosov/profile.hpp"

namespace anosov {

enum class StepMethod {
    DormandPrince54,  ///< adaptive embedded 5(4) pair
    FixedStep,        ///< same tableau, constant step max_step, no error control
};

struct IntegratorConfig {
    double rel_tol = 1e-12;
    double abs_tol = 1e-14;
    double max_step = 0.05;
    double min_step = 1e-12;
    StepMethod method = StepMethod::DormandPrince54;

    /// Throws std::invalid_argument unless 0 < min_step < max_step and tolerances are positive.
    void validate() const;
};

/// Accepted node of a Jacobi solution: f, f' and f'' = -kappa f.
struct JacobiNode {
    double s;
    double f;
    double fp;
    double fpp;
};

/// Dense solution (f, f') of f'' + kappa f = 0.
///
/// Between accepted nodes f is the quintic Hermite interpolant of (f, f', f'') and f' is its
/// derivative, so f and f' are continuous across nodes. Copies share the node storage.
class ScalarSolution {
public:
    ScalarSolution() = default;
    explicit ScalarSolution(std::vector<JacobiNode> nodes);

    Interval interval() const;
    double f(double s) const { return eval(s).first; }
    double fp(double s) const { return eval(s).second; }
    std::pair<double, double> eval(double s) const;
    std::span<const JacobiNode> nodes() const;
    bool empty() const { return !nodes_ || nodes_->empty(); }

    /// c * (f, f').
    ScalarSolution scaled(double c) const;

private:
    std::shared_ptr<const std::vector<JacobiNode>> nodes_;
};

enum class BlowUpDirection { Upward, Downward };

struct BlowUp {
    double s_escape;   ///< first accepted point with |u| > cap
    Bracket pole;      ///< bracket of width <= 1e-6 around the pole of u
    BlowUpDirection direction;
};

/// Dense Riccati solution u on the interval where it stayed finite.
struct RiccatiSolution {
    Interval interval;
    std::function<double(double)> u_fn;
    std::optional<BlowUp> blow_up;           ///< escape while integrating toward larger s
    std::optional<BlowUp> blow_up_backward;  ///< escape while integrating toward smaller s

    /// Throws DomainError outside `interval`.
    double u(double s) const;
};

/// Solves f'' + kappa f = 0 with f(s0) = f0, f'(s0) = fp0 on `target`, integrating both ways from s0.
ScalarSolution integrate_jacobi(const CurvatureProfile& profile, double s0, double f0, double fp0,
                                Interval target, const IntegratorConfig& cfg = {});

/// W(f, g)(s) = f'(s) g(s) - f(s) g'(s).
double wronskian(const ScalarSolution& f, const ScalarSolution& g, double s);

/// Solves u' + u^2 + kappa = 0 from u(s0) = u0 across `target` until |u| exceeds `cap`.
RiccatiSolution integrate_riccati(const CurvatureProfile& profile, double s0, double u0, Interval target,
                                  double cap = 1e6, const IntegratorConfig& cfg = {});

/// Bisection for a sign change of `fn` in [lo, hi] down to `width`.
Bracket bisect_sign_change(const std::function<double(double)>& fn, double lo, double hi, double width);

}  // namespace anosov
