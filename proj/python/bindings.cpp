#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "anosov/anosov.hpp"
#include "anosov/config.hpp"
#include "anosov/curvature.hpp"
#include "anosov/errors.hpp"
#include "anosov/export.hpp"
#include "anosov/jacobi.hpp"
#include "anosov/riccati.hpp"

namespace py = pybind11;
using namespace anosov;

namespace {

Interval to_interval(std::pair<double, double> p) { return {p.first, p.second}; }

py::object as_python(const Json& j) {
    py::module_ json = py::module_::import("json");
    return json.attr("loads")(j.dump());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Jacobi fields, stable solutions and Anosov checks for surface geodesic flows";

    // Later registrations are tried first, so the base class goes first.
    auto& base = py::register_exception<Error>(m, "AnosovError", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", base);
    py::register_exception<ParseError>(m, "ParseError", base);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", base);
    py::register_exception<ConjugatePointError>(m, "ConjugatePointError", base);
    py::register_exception<DomainError>(m, "DomainError", base);

    py::class_<CurvatureProfile>(m, "Profile")
        .def("__call__", [](const CurvatureProfile& p, double s) { return eval_curvature(p, s); })
        .def_readonly("lower_bound_k", &CurvatureProfile::lower_bound_k)
        .def_readonly("description", &CurvatureProfile::description)
        .def_property_readonly("domain", [](const CurvatureProfile& p) { return std::pair(p.domain.lo, p.domain.hi); })
        .def("shifted", [](const CurvatureProfile& p, double tau) { return shifted(p, tau); })
        .def("reversed", [](const CurvatureProfile& p) { return reversed(p); });

    m.def("constant_profile",
          [](double kappa, std::pair<double, double> domain) { return constant_profile(kappa, to_interval(domain)); },
          py::arg("kappa"), py::arg("domain") = std::pair(-1e3, 1e3));
    m.def(
        "expression_profile",
        [](const std::string& text, std::pair<double, double> domain, double k) {
            return expression_profile(text, to_interval(domain), k);
        },
        py::arg("expression"), py::arg("domain") = std::pair(-1e3, 1e3), py::arg("k") = -1.0);

    py::class_<ScalarSolution>(m, "Solution")
        .def("f", &ScalarSolution::f)
        .def("fp", &ScalarSolution::fp)
        .def("__call__", &ScalarSolution::f)
        .def_property_readonly("interval", [](const ScalarSolution& s) {
            const Interval iv = s.interval();
            return std::pair(iv.lo, iv.hi);
        });

    m.def(
        "integrate_jacobi",
        [](const CurvatureProfile& p, double s0, double f0, double fp0, std::pair<double, double> target) {
            return integrate_jacobi(p, s0, f0, fp0, to_interval(target));
        },
        py::arg("profile"), py::arg("s0"), py::arg("f0"), py::arg("fp0"), py::arg("target"));
    m.def(
        "solve_a", [](const CurvatureProfile& p, std::pair<double, double> w) { return solve_a(p, to_interval(w)); },
        py::arg("profile"), py::arg("window"));
    m.def(
        "solve_b", [](const CurvatureProfile& p, std::pair<double, double> w) { return solve_b(p, to_interval(w)); },
        py::arg("profile"), py::arg("window"));
    m.def("wronskian", &wronskian, py::arg("f"), py::arg("g"), py::arg("s"));

    m.def(
        "stable_data",
        [](const CurvatureProfile& p, std::pair<double, double> w, double slope_tol) {
            LimitConfig limit;
            limit.slope_tol = slope_tol;
            const StableData st = stable_data(p, to_interval(w), limit);
            py::dict out = as_python(to_json(st));
            out["d"] = st.d;
            out["dbar"] = st.dbar;
            return out;
        },
        py::arg("profile"), py::arg("window"), py::arg("slope_tol") = 1e-9);

    m.def(
        "conjugate_points",
        [](const CurvatureProfile& p, std::pair<double, double> w) {
            return conjugate_points(p, to_interval(w)).zeros;
        },
        py::arg("profile"), py::arg("window"));

    m.def(
        "flow_pushforward",
        [](const CurvatureProfile& p, double w0, double w1, double t) {
            const TangentVector v = flow_pushforward(p, {w0, w1}, t);
            return std::pair(v.w0, v.w1);
        },
        py::arg("profile"), py::arg("w0"), py::arg("w1"), py::arg("t"));

    m.def(
        "gaussian_curvature",
        [](const std::string& lambda, std::tuple<double, double, double, double> rect, double x, double y,
           bool finite_difference) {
            const auto [x0, x1, y0, y1] = rect;
            const ConformalChart chart = ConformalChart::from_string(
                lambda, {x0, x1, y0, y1},
                finite_difference ? DerivativeMode::FiniteDifference : DerivativeMode::Analytic);
            return gaussian_curvature(chart, x, y);
        },
        py::arg("lam"), py::arg("rect"), py::arg("x"), py::arg("y"), py::arg("finite_difference") = false);

    m.def(
        "check_anosov",
        [](const std::string& config_json, std::optional<int> samples, std::optional<std::uint64_t> seed) {
            RunConfig run = parse_run_config(config_json);
            if (samples) run.samples = *samples;
            if (seed) run.seed = *seed;
            const Surface surface = build_surface(run.surface, run.window);
            const AnosovReport report = check_anosov(build_family(run, surface), run.check);
            return as_python(to_json(report));
        },
        py::arg("config_json"), py::arg("samples") = py::none(), py::arg("seed") = py::none(),
        "Runs the checker on a JSON surface config and returns the report as a dict.");
}
