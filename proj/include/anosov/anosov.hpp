#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "anosov/curvature.hpp"
#include "anosov/jacobi.hpp"
#include "anosov/ode.hpp"
#include "anosov/profile.hpp"

namespace anosov {

/// Perpendicular Jacobi data (J(0), J'(0)) of a tangent vector orthogonal to the flow.
struct TangentVector {
    double w0 = 0.0;
    double w1 = 0.0;

    double sasaki_norm() const { return std::hypot(w0, w1); }
};

/// (J(t), J'(t)) for the solution with initial data (w0, w1).
TangentVector flow_pushforward(const CurvatureProfile& profile, TangentVector v, double t,
                               const IntegratorConfig& cfg = {});

double transversality_gap(const StableData& stable);

struct BoundedFieldResult {
    bool found = false;
    std::optional<TangentVector> witness;
    double sup_abs_d = 0.0;
    /// max |d(s)| - min |d(s)| over the window; a bounded witness under no focal points has constant norm.
    double norm_variation = 0.0;
};

/// found iff gap <= gap_tol and sup |d| <= bound_cap over the window.
BoundedFieldResult bounded_field_detector(const StableData& stable, Interval window, double gap_tol = 1e-6,
                                          double bound_cap = 1e6);

struct ParallelFieldResult {
    bool found = false;
    double sup_abs_kappa = 0.0;
    /// found only because sup |kappa| is nonzero but under kappa_tol.
    bool tolerance_sensitive = false;
};

ParallelFieldResult parallel_field_detector(const CurvatureProfile& profile, Interval window, double kappa_tol = 1e-9,
                                            double step = 1e-3);

struct PassageResult {
    bool passes = false;
    std::optional<double> witness_s;
    double min_kappa = 0.0;
};

PassageResult negative_curvature_passage(const CurvatureProfile& profile, Interval window, double kappa_tol = 1e-9,
                                         double step = 1e-3);

struct PhiSample {
    double s = 0.0;
    double phi = 0.0;
};

/// phi(s) = max of |(d(tau + s), d'(tau + s))| / |(d(tau), d'(tau))| over the family and over base points
/// tau = 0, h, 2h, ... <= base_span + (s_max - s), h being the grid spacing. The ratio is the growth of the
/// unit stable vector at g^tau v. Members with empty stable data are skipped.
std::vector<PhiSample> phi_estimate(const std::vector<StableData>& family, const std::vector<double>& s_grid,
                                    double base_span = 8.0);

struct SubmultiplicativityAudit {
    bool holds = true;
    std::size_t pairs_checked = 0;
    double worst_excess = 0.0;  ///< max of phi(s+t) - phi(s) phi(t)
    double worst_s = 0.0;
    double worst_t = 0.0;
};

struct RateEstimate {
    double a_const = 0.0;
    double c_const = 0.0;
    Interval fit_window{1.0, 8.0};
    double fit_residual = 0.0;
    std::vector<PhiSample> phi_samples;
    SubmultiplicativityAudit audit;
    bool contracting = false;  ///< c_const > contraction_tol
};

/// Least squares of log phi against s over the fit window. Needs at least 4 samples there.
RateEstimate fit_rates(const std::vector<PhiSample>& samples, Interval fit_window = {1.0, 8.0},
                       double audit_slack = 1e-6, double contraction_tol = 1e-6);

/// One geodesic of a family: its curvature profile and the arc-length window it is analysed on.
struct FamilyMember {
    std::string id;
    CurvatureProfile profile;
    Interval window;
    double shift = 0.0;                 ///< profile families
    std::optional<UnitTangent> start;   ///< chart families
    ExitReason exit_forward = ExitReason::ReachedHorizon;
    ExitReason exit_backward = ExitReason::ReachedHorizon;
};

struct GeodesicFamily {
    std::string description;
    std::vector<FamilyMember> members;
    std::uint64_t seed = 0;
};

/// The profile under seeded shifts tau_0 = 0, tau_i uniform in [-shift_span, shift_span].
GeodesicFamily profile_family(const CurvatureProfile& profile, int count, std::uint64_t seed, Interval window,
                              double shift_span = 10.0);

/// Two-sided geodesic traces from seeded unit tangents. A member's window is cut to its trace when the
/// geodesic leaves the chart early.
GeodesicFamily chart_family(const ConformalChart& chart, int count, std::uint64_t seed, Interval window,
                            std::optional<Rect> sample_box = std::nullopt, const IntegratorConfig& cfg = {});

struct CheckConfig {
    LimitConfig limit;
    IntegratorConfig integrator;
    double gap_tol = 1e-6;
    double kappa_tol = 1e-9;
    double bound_cap = 1e6;
    Interval fit_window{1.0, 8.0};
    double phi_step = 0.25;
    double phi_base_span = 8.0;
    double scan_step = 1e-3;
    double k = -1.0;  ///< < 0: max declared lower_bound_k over the family
};

struct Conditions {
    bool transversal = false;        ///< stable and unstable subspaces meet only in 0
    bool direct_sum = false;         ///< not computed; follows from transversality in dimension two
    bool no_bounded_field = false;
    bool no_parallel_field = false;
    bool negative_passage = false;   ///< the geodesic meets negative curvature

    bool all() const { return transversal && no_bounded_field && no_parallel_field && negative_passage; }
};

struct GeodesicRecord {
    std::size_t index = 0;
    std::string id;
    Interval window;
    double gap = 0.0;
    double d_slope = 0.0;
    double dbar_slope = 0.0;
    double residual = 0.0;
    bool slope_monotone = true;
    bool bounded_field_found = false;
    std::optional<TangentVector> bounded_witness;
    double bounded_norm_variation = 0.0;
    bool parallel_field_found = false;
    bool parallel_tolerance_sensitive = false;
    double min_kappa = 0.0;
    std::optional<double> min_kappa_s;
    bool focal_ok = true;
    Conditions conditions;
    bool passes = false;
    double shift = 0.0;
    std::optional<UnitTangent> start;
};

struct AnosovConstants {
    double k = 0.0;
    double A = 1.0;
    double B = 1.0;
    bool A_from_focal_monotonicity = true;
};

struct AnosovReport {
    static constexpr int schema_version = 1;
    std::string surface;
    std::vector<GeodesicRecord> geodesics;
    bool anosov = false;
    std::string evidence = "sampled evidence";
    RateEstimate rate;
    AnosovConstants constants;
    std::size_t sample_count = 0;
    std::uint64_t seed = 0;
    bool no_focal_points = true;  ///< focal_monotonicity passed on every sample, both directions
    double min_gap = 0.0;
    std::vector<std::string> notes;
};

/// Evaluates the equivalent conditions on every member. Throws ConjugatePointError naming the geodesic when a
/// sample has conjugate points; ConvergenceError propagates from the stable-limit construction.
AnosovReport check_anosov(const GeodesicFamily& family, const CheckConfig& config = {});

}  // namespace anosov
