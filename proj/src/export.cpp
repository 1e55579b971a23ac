#include "anosov/export.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace anosov {

namespace {

// JSON has no infinities; they are written as null.
Json num(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

template <class Fn>
void grid(Interval iv, double step, Fn&& fn) {
    const long n = static_cast<long>(std::floor(iv.length() / step + 1e-9));
    for (long i = 0; i <= n; ++i) fn(iv.lo + step * static_cast<double>(i));
    if (iv.lo + step * static_cast<double>(n) < iv.hi) fn(iv.hi);
}

const char* bool_text(bool b) { return b ? "true" : "false"; }

}  // namespace

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvTable::CsvTable(std::vector<std::string> header) : columns_(header.size()) { add_row(header); }

void CsvTable::add_row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format_number(v));
    add_row(cells);
}

void CsvTable::add_row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw std::invalid_argument("CSV row width does not match the header");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) text_ += ',';
        text_ += cells[i];
    }
    text_ += '\n';
}

std::string CsvTable::str() const { return text_; }

Json to_json(const Interval& iv) { return Json::array({num(iv.lo), num(iv.hi)}); }

Json to_json(const SlopeSequence& seq) {
    Json j;
    j["horizons"] = seq.horizons;
    j["raw_slopes"] = seq.raw;
    j["corrected_slopes"] = seq.corrected;
    j["monotone"] = seq.monotone;
    j["residual"] = num(seq.residual);
    j["converged_horizon"] = seq.converged_horizon;
    return j;
}

Json to_json(const StableData& st) {
    Json j;
    j["d_slope"] = num(st.d_slope);
    j["dbar_slope"] = num(st.dbar_slope);
    j["gap"] = num(st.gap);
    j["residual"] = num(st.residual);
    j["horizon_used"] = num(st.horizon_used);
    j["monotone"] = st.monotone;
    j["forward"] = to_json(st.forward);
    j["backward"] = to_json(st.backward);
    return j;
}

Json to_json(const ConjugateReport& report) {
    Json j;
    j["ok"] = report.ok;
    Json zeros = Json::array();
    for (const auto& b : report.zeros) zeros.push_back(Json::array({b.first, b.second}));
    j["zeros"] = zeros;
    return j;
}

Json to_json(const BoundReport& r) {
    Json j;
    j["bound_name"] = r.bound_name;
    j["max_violation"] = num(r.max_violation);
    j["worst_s"] = num(r.worst_s);
    j["pass"] = r.pass;
    j["grid_step"] = r.grid_step;
    j["tol"] = r.tol;
    j["interval"] = to_json(r.interval);
    j["note"] = r.note;
    return j;
}

Json to_json(const GrowthReport& r) {
    Json j;
    j["R"] = r.R;
    j["T"] = num(r.T);
    j["conclusive"] = r.conclusive;
    j["cross_checked"] = r.cross_checked;
    j["sufficient_T"] = r.sufficient_T ? Json(*r.sufficient_T) : Json(nullptr);
    j["sufficient_condition_holds"] = r.sufficient_condition_holds;
    j["sufficient_condition_failure"] =
        r.sufficient_condition_failure ? Json(*r.sufficient_condition_failure) : Json(nullptr);
    return j;
}

Json to_json(const RateEstimate& rate) {
    Json j;
    j["a_const"] = num(rate.a_const);
    j["c_const"] = num(rate.c_const);
    j["fit_window"] = to_json(rate.fit_window);
    j["fit_residual"] = num(rate.fit_residual);
    j["contracting"] = rate.contracting;
    Json samples = Json::array();
    for (const auto& p : rate.phi_samples) samples.push_back(Json::array({p.s, num(p.phi)}));
    j["phi_samples"] = samples;
    Json audit;
    audit["holds"] = rate.audit.holds;
    audit["pairs_checked"] = rate.audit.pairs_checked;
    audit["worst_excess"] = num(rate.audit.worst_excess);
    audit["worst_s"] = rate.audit.worst_s;
    audit["worst_t"] = rate.audit.worst_t;
    j["submultiplicativity"] = audit;
    return j;
}

Json to_json(const AnosovReport& report) {
    Json j;
    j["schema_version"] = AnosovReport::schema_version;
    j["surface"] = report.surface;
    j["verdict"] = report.anosov ? "anosov" : "not-anosov";
    j["evidence"] = report.evidence;
    j["sample_count"] = report.sample_count;
    j["seed"] = report.seed;
    j["no_focal_points"] = report.no_focal_points;
    j["min_gap"] = num(report.min_gap);
    Json c;
    c["k"] = num(report.constants.k);
    c["A"] = num(report.constants.A);
    c["B"] = num(report.constants.B);
    c["A_from_focal_monotonicity"] = report.constants.A_from_focal_monotonicity;
    j["constants"] = c;
    j["rate"] = to_json(report.rate);
    Json geos = Json::array();
    for (const auto& g : report.geodesics) {
        Json r;
        r["index"] = g.index;
        r["id"] = g.id;
        r["window"] = to_json(g.window);
        r["gap"] = num(g.gap);
        r["d_slope"] = num(g.d_slope);
        r["dbar_slope"] = num(g.dbar_slope);
        r["residual"] = num(g.residual);
        r["slope_monotone"] = g.slope_monotone;
        r["bounded_field_found"] = g.bounded_field_found;
        r["bounded_witness"] =
            g.bounded_witness ? Json::array({g.bounded_witness->w0, g.bounded_witness->w1}) : Json(nullptr);
        r["parallel_field_found"] = g.parallel_field_found;
        r["parallel_tolerance_sensitive"] = g.parallel_tolerance_sensitive;
        r["min_kappa"] = num(g.min_kappa);
        r["min_kappa_s"] = g.min_kappa_s ? Json(*g.min_kappa_s) : Json(nullptr);
        r["focal_monotone"] = g.focal_ok;
        Json cond;
        cond["transversality"] = g.conditions.transversal;
        cond["direct_sum"] = g.conditions.direct_sum;
        cond["no_bounded_field"] = g.conditions.no_bounded_field;
        cond["no_parallel_field"] = g.conditions.no_parallel_field;
        cond["negative_curvature_passage"] = g.conditions.negative_passage;
        r["conditions"] = cond;
        r["passes"] = g.passes;
        r["shift"] = g.shift;
        if (g.start) {
            r["start"] = {{"x", g.start->point.x},
                          {"y", g.start->point.y},
                          {"vx", g.start->velocity.x},
                          {"vy", g.start->velocity.y}};
        } else {
            r["start"] = nullptr;
        }
        geos.push_back(r);
    }
    j["geodesics"] = geos;
    j["notes"] = report.notes;
    return j;
}

CsvTable jacobi_table(const ScalarSolution& a, const StableData& stable, Interval window, double step) {
    CsvTable t({"s", "a", "ap", "d", "dp", "dbar", "dbarp"});
    grid(window, step, [&](double s) {
        const auto [av, ad] = a.eval(s);
        const auto [dv, dd] = stable.d.eval(s);
        const auto [bv, bd] = stable.dbar.eval(s);
        t.add_row(std::vector<double>{s, av, ad, dv, dd, bv, bd});
    });
    return t;
}

CsvTable riccati_table(const RiccatiSolution& u, double k, Interval interval, double step) {
    CsvTable t({"s", "u", "envelope"});
    grid(interval, step, [&](double s) { t.add_row(std::vector<double>{s, u.u(s), coth_envelope(k, s)}); });
    return t;
}

CsvTable trace_table(const GeodesicTrace& trace) {
    CsvTable t({"s", "x", "y", "vx", "vy", "kappa"});
    for (const auto& p : trace.samples) {
        t.add_row(std::vector<double>{p.s, p.x, p.y, p.vx, p.vy, trace.kappa_profile(p.s)});
    }
    return t;
}

CsvTable phi_table(const std::vector<PhiSample>& samples) {
    CsvTable t({"s", "phi"});
    for (const auto& p : samples) t.add_row(std::vector<double>{p.s, p.phi});
    return t;
}

CsvTable geodesic_table(const AnosovReport& report) {
    CsvTable t({"geodesic_id", "gap", "min_kappa", "bounded", "parallel", "verdict"});
    for (const auto& g : report.geodesics) {
        t.add_row(std::vector<std::string>{g.id, format_number(g.gap), format_number(g.min_kappa),
                                           bool_text(g.bounded_field_found), bool_text(g.parallel_field_found),
                                           g.passes ? "pass" : "fail"});
    }
    return t;
}

}  // namespace anosov
