#include "anosov/anosov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "anosov/errors.hpp"
#include "anosov/rng.hpp"

namespace anosov {

namespace {

template <class Fn>
void scan(Interval iv, double step, Fn&& fn) {
    const long n = static_cast<long>(std::floor(iv.length() / step + 1e-9));
    for (long i = 0; i <= n; ++i) fn(iv.lo + step * static_cast<double>(i));
    if (iv.lo + step * static_cast<double>(n) < iv.hi) fn(iv.hi);
}

// min over s <= t in [lo, hi] of |a(t)| / |a(s)|, on a grid.
double empirical_contraction(const ScalarSolution& a, double lo, double hi, double step) {
    std::vector<double> vals;
    scan({lo, hi}, step, [&](double s) { vals.push_back(std::abs(a.f(s))); });
    double best = std::numeric_limits<double>::infinity();
    double suffix_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = vals.size(); i-- > 0;) {
        suffix_min = std::min(suffix_min, vals[i]);
        if (vals[i] > 0.0) best = std::min(best, suffix_min / vals[i]);
    }
    return best;
}

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

}  // namespace

TangentVector flow_pushforward(const CurvatureProfile& profile, TangentVector v, double t,
                               const IntegratorConfig& cfg) {
    if (t == 0.0 || (v.w0 == 0.0 && v.w1 == 0.0)) return t == 0.0 ? v : TangentVector{0.0, 0.0};
    const ScalarSolution f = integrate_jacobi(profile, 0.0, v.w0, v.w1, {std::min(0.0, t), std::max(0.0, t)}, cfg);
    const auto [value, slope] = f.eval(t);
    return {value, slope};
}

double transversality_gap(const StableData& stable) { return stable.dbar_slope - stable.d_slope; }

BoundedFieldResult bounded_field_detector(const StableData& stable, Interval window, double gap_tol,
                                          double bound_cap) {
    BoundedFieldResult out;
    const Interval di = stable.d.interval();
    const Interval iv{std::max(window.lo, di.lo), std::min(window.hi, di.hi)};
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (const auto& n : stable.d.nodes()) {
        if (n.s < iv.lo || n.s > iv.hi) continue;
        lo = std::min(lo, std::abs(n.f));
        hi = std::max(hi, std::abs(n.f));
    }
    out.sup_abs_d = hi;
    out.norm_variation = hi - lo;
    out.found = transversality_gap(stable) <= gap_tol && hi <= bound_cap;
    if (out.found) out.witness = TangentVector{1.0, stable.d_slope};
    return out;
}

ParallelFieldResult parallel_field_detector(const CurvatureProfile& profile, Interval window, double kappa_tol,
                                            double step) {
    ParallelFieldResult out;
    out.sup_abs_kappa = max_abs_curvature(profile, window, step).value;
    out.found = out.sup_abs_kappa <= kappa_tol;
    out.tolerance_sensitive = out.found && out.sup_abs_kappa > 0.0;
    return out;
}

PassageResult negative_curvature_passage(const CurvatureProfile& profile, Interval window, double kappa_tol,
                                         double step) {
    PassageResult out;
    const CurvatureExtremum m = min_curvature(profile, window, step);
    out.min_kappa = m.value;
    out.passes = m.value < -kappa_tol;
    if (out.passes) out.witness_s = m.s;
    return out;
}

std::vector<PhiSample> phi_estimate(const std::vector<StableData>& family, const std::vector<double>& s_grid,
                                    double base_span) {
    std::vector<PhiSample> out;
    if (s_grid.empty()) return out;
    if (!std::is_sorted(s_grid.begin(), s_grid.end())) throw DataError("phi grid must be ascending");
    const double step = s_grid.size() > 1 ? s_grid[1] - s_grid[0] : 1.0;
    const double s_max = s_grid.back();
    out.reserve(s_grid.size());
    for (double s : s_grid) {
        // Base points tau on the s-grid spacing; the range shrinks as s grows so that the sampled
        // stable vectors at tau and tau + t are both in range whenever s + t is.
        const double tau_max = base_span + (s_max - s);
        double phi = 0.0;
        bool any = false;
        for (const auto& st : family) {
            if (st.d.empty()) continue;
            const Interval di = st.d.interval();
            for (long i = 0;; ++i) {
                const double tau = step * static_cast<double>(i);
                if (tau > tau_max + 1e-9 || tau + s > di.hi) break;
                const auto [v0, d0] = st.d.eval(tau);
                const auto [v1, d1] = st.d.eval(tau + s);
                phi = std::max(phi, std::hypot(v1, d1) / std::hypot(v0, d0));
                any = true;
            }
        }
        if (any) out.push_back({s, phi});
    }
    return out;
}

RateEstimate fit_rates(const std::vector<PhiSample>& samples, Interval fit_window, double audit_slack,
                       double contraction_tol) {
    RateEstimate out;
    out.fit_window = fit_window;
    out.phi_samples = samples;
    std::vector<double> xs, ys;
    for (const auto& p : samples) {
        if (!(p.phi > 0.0) || !std::isfinite(p.phi)) {
            throw DataError("phi sample at s = " + format_double(p.s) + " is not positive");
        }
        if (fit_window.contains(p.s)) {
            xs.push_back(p.s);
            ys.push_back(std::log(p.phi));
        }
    }
    if (xs.size() < 4) throw DataError("rate fit needs at least 4 samples inside the fit window");
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (!(sxx > 0.0)) throw DataError("rate fit needs distinct sample positions");
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    out.c_const = -slope;
    out.a_const = std::exp(intercept);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        out.fit_residual = std::max(out.fit_residual, std::abs(ys[i] - (intercept + slope * xs[i])));
    }
    out.contracting = out.c_const > contraction_tol;

    // phi(s + t) <= phi(s) phi(t) over every grid pair whose sum is also on the grid.
    std::map<double, double> lookup;
    for (const auto& p : samples) lookup[p.s] = p.phi;
    auto find = [&lookup](double s) -> std::optional<double> {
        auto it = lookup.lower_bound(s - 1e-9);
        if (it != lookup.end() && std::abs(it->first - s) <= 1e-9) return it->second;
        return std::nullopt;
    };
    SubmultiplicativityAudit& audit = out.audit;
    audit.worst_excess = -std::numeric_limits<double>::infinity();
    for (auto i = lookup.begin(); i != lookup.end(); ++i) {
        for (auto j = i; j != lookup.end(); ++j) {
            const auto sum = find(i->first + j->first);
            if (!sum) continue;
            ++audit.pairs_checked;
            const double excess = *sum - i->second * j->second;
            if (excess > audit.worst_excess) {
                audit.worst_excess = excess;
                audit.worst_s = i->first;
                audit.worst_t = j->first;
            }
        }
    }
    if (audit.pairs_checked == 0) audit.worst_excess = 0.0;
    audit.holds = audit.worst_excess <= audit_slack;
    return out;
}

GeodesicFamily profile_family(const CurvatureProfile& profile, int count, std::uint64_t seed, Interval window,
                              double shift_span) {
    if (count < 1) throw std::invalid_argument("family needs at least one member");
    GeodesicFamily fam;
    fam.seed = seed;
    fam.description = profile.description;
    Rng rng(seed);
    for (int i = 0; i < count; ++i) {
        const double tau = i == 0 ? 0.0 : rng.uniform(-shift_span, shift_span);
        FamilyMember m;
        m.id = "shift-" + std::to_string(i);
        m.profile = shifted(profile, tau);
        m.window = window;
        m.shift = tau;
        fam.members.push_back(std::move(m));
    }
    return fam;
}

GeodesicFamily chart_family(const ConformalChart& chart, int count, std::uint64_t seed, Interval window,
                            std::optional<Rect> sample_box, const IntegratorConfig& cfg) {
    GeodesicFamily fam;
    fam.seed = seed;
    fam.description = chart.description();
    const auto tangents = sample_box ? sample_unit_tangents(chart, count, seed, *sample_box)
                                     : sample_unit_tangents(chart, count, seed);
    for (std::size_t i = 0; i < tangents.size(); ++i) {
        const auto& ut = tangents[i];
        GeodesicTrace trace =
            geodesic_trace_two_sided(chart, ut.point, ut.velocity, std::max(0.0, -window.lo), window.hi, cfg);
        FamilyMember m;
        m.id = "geodesic-" + std::to_string(i);
        const Interval ti = trace.interval();
        m.window = {std::max(window.lo, ti.lo), std::min(window.hi, ti.hi)};
        m.profile = trace.kappa_profile;
        m.start = ut;
        m.exit_forward = trace.exit_reason;
        m.exit_backward = trace.exit_reason_backward;
        fam.members.push_back(std::move(m));
    }
    return fam;
}

AnosovReport check_anosov(const GeodesicFamily& family, const CheckConfig& config) {
    if (family.members.empty()) throw std::invalid_argument("empty geodesic family");
    AnosovReport report;
    report.surface = family.description;
    report.seed = family.seed;
    report.sample_count = family.members.size();

    std::vector<StableData> stables;
    stables.reserve(family.members.size());
    double k_max = 0.0;
    double A = 1.0;
    bool A_empirical = false;

    for (std::size_t i = 0; i < family.members.size(); ++i) {
        const FamilyMember& m = family.members[i];
        const IntegratorConfig& cfg = config.integrator;

        const ConjugateReport conj = conjugate_points(m.profile, m.window, cfg);
        if (!conj.ok) {
            std::ostringstream os;
            os << "geodesic " << m.id << " has conjugate points (first zero of a near s = "
               << 0.5 * (conj.zeros.front().first + conj.zeros.front().second)
               << "); the analysis assumes none";
            throw ConjugatePointError(os.str(), conj.zeros);
        }

        StableData st = stable_data(m.profile, m.window, config.limit, cfg);

        GeodesicRecord rec;
        rec.index = i;
        rec.id = m.id;
        rec.window = m.window;
        rec.shift = m.shift;
        rec.start = m.start;
        rec.gap = transversality_gap(st);
        rec.d_slope = st.d_slope;
        rec.dbar_slope = st.dbar_slope;
        rec.residual = st.residual;
        rec.slope_monotone = st.monotone;

        const BoundedFieldResult bounded = bounded_field_detector(st, m.window, config.gap_tol, config.bound_cap);
        rec.bounded_field_found = bounded.found;
        rec.bounded_witness = bounded.witness;
        rec.bounded_norm_variation = bounded.norm_variation;

        const ParallelFieldResult parallel = parallel_field_detector(m.profile, m.window, config.kappa_tol,
                                                                     config.scan_step);
        rec.parallel_field_found = parallel.found;
        rec.parallel_tolerance_sensitive = parallel.tolerance_sensitive;

        const PassageResult passage = negative_curvature_passage(m.profile, m.window, config.kappa_tol,
                                                                 config.scan_step);
        rec.min_kappa = passage.min_kappa;
        rec.min_kappa_s = min_curvature(m.profile, m.window, config.scan_step).s;

        const FocalReport fwd = focal_monotonicity(m.profile, m.window, cfg);
        const FocalReport bwd = focal_monotonicity(reversed(m.profile), {-m.window.hi, -m.window.lo}, cfg);
        rec.focal_ok = fwd.ok && bwd.ok;

        rec.conditions.transversal = rec.gap > config.gap_tol;
        rec.conditions.direct_sum = rec.conditions.transversal;
        rec.conditions.no_bounded_field = !bounded.found;
        rec.conditions.no_parallel_field = !parallel.found;
        rec.conditions.negative_passage = passage.passes;
        rec.passes = rec.conditions.all();

        k_max = std::max(k_max, m.profile.lower_bound_k);
        if (!rec.focal_ok && m.window.hi > 1.0) {
            const ScalarSolution a = solve_a(m.profile, {0.0, m.window.hi}, cfg);
            A = std::min(A, empirical_contraction(a, 1.0, m.window.hi, 0.01));
            A_empirical = true;
        }

        report.no_focal_points = report.no_focal_points && rec.focal_ok;
        report.geodesics.push_back(std::move(rec));
        stables.push_back(std::move(st));
    }

    report.anosov = std::all_of(report.geodesics.begin(), report.geodesics.end(),
                                [](const GeodesicRecord& r) { return r.passes; });
    report.min_gap = std::numeric_limits<double>::infinity();
    for (const auto& r : report.geodesics) report.min_gap = std::min(report.min_gap, r.gap);

    report.constants.k = config.k >= 0.0 ? config.k : k_max;
    report.constants.A = report.no_focal_points ? 1.0 : A;
    report.constants.A_from_focal_monotonicity = report.no_focal_points || !A_empirical;
    report.constants.B = report.constants.A > 0.0
                             ? std::sqrt((1.0 + report.constants.k * report.constants.k) /
                                         (report.constants.A * report.constants.A))
                             : std::numeric_limits<double>::infinity();

    std::vector<double> grid;
    double min_hi = std::numeric_limits<double>::infinity();
    for (const auto& m : family.members) min_hi = std::min(min_hi, m.window.hi);
    const double grid_hi = std::min(config.fit_window.hi, min_hi);
    scan({0.0, grid_hi}, config.phi_step, [&](double s) { grid.push_back(s); });
    double base_span = config.phi_base_span;
    for (const auto& m : family.members) base_span = std::min(base_span, std::max(0.0, m.window.hi - grid_hi));
    report.rate = fit_rates(phi_estimate(stables, grid, base_span), config.fit_window);

    report.notes.push_back("verdict is sampled evidence over " + std::to_string(report.sample_count) +
                           " geodesics, not a proof");
    report.notes.push_back("direct-sum condition is reported as implied by transversality");
    if (!report.no_focal_points) {
        report.notes.push_back(
            "focal monotonicity failed on some sample: the parallel-field and negative-passage equivalences are "
            "not asserted");
    }
    if (!report.rate.contracting) report.notes.push_back("fitted contraction exponent is not positive");
    if (std::any_of(report.geodesics.begin(), report.geodesics.end(),
                    [](const GeodesicRecord& r) { return r.parallel_tolerance_sensitive; })) {
        report.notes.push_back("parallel field detected only within kappa_tol: tolerance sensitive");
    }
    return report;
}

}  // namespace anosov
