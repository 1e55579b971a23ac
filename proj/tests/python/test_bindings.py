import json
import math

import jsonschema
import pytest

anosov_geo = pytest.importorskip("anosov_geo")

from conftest import CONFIGS, SCHEMAS


def test_solve_a_matches_sinh():
    a = anosov_geo.solve_a(anosov_geo.constant_profile(-1.0), (0.0, 10.0))
    assert a.interval == (0.0, 10.0)
    assert max(abs(a(s / 10) - math.sinh(s / 10)) for s in range(101)) < 1e-7


def test_profile_operations():
    p = anosov_geo.expression_profile("-1 + 0.9*sin(s)")
    assert p(0.0) == pytest.approx(-1.0)
    assert p.shifted(1.0)(0.5) == pytest.approx(p(1.5))
    assert p.reversed()(2.0) == pytest.approx(p(-2.0))
    assert p.lower_bound_k > math.sqrt(1.9)


def test_stable_data_and_wronskian():
    p = anosov_geo.constant_profile(-1.0)
    st = anosov_geo.stable_data(p, (-64.0, 64.0))
    assert st["gap"] == pytest.approx(2.0, abs=1e-7)
    assert st["d"](1.0) == pytest.approx(math.exp(-1.0), abs=1e-9)
    a = anosov_geo.solve_a(p, (-5.0, 5.0))
    assert anosov_geo.wronskian(a, st["d"], 2.0) == pytest.approx(1.0, abs=1e-8)


def test_conjugate_points_and_errors():
    zeros = anosov_geo.conjugate_points(anosov_geo.constant_profile(1.0), (0.0, 6.5))
    assert len(zeros) == 2
    assert zeros[0][0] <= math.pi <= zeros[0][1]
    with pytest.raises(anosov_geo.ParseError):
        anosov_geo.expression_profile("sin(")
    with pytest.raises(anosov_geo.ConjugatePointError):
        anosov_geo.check_anosov((CONFIGS / "sphere.json").read_text())
    assert issubclass(anosov_geo.ConvergenceError, anosov_geo.AnosovError)


def test_flow_pushforward_and_curvature():
    w0, w1 = anosov_geo.flow_pushforward(anosov_geo.constant_profile(-1.0), 1.0, -1.0, 3.0)
    assert w0 == pytest.approx(math.exp(-3.0), abs=1e-9)
    assert w1 == pytest.approx(-math.exp(-3.0), abs=1e-9)
    k = anosov_geo.gaussian_curvature("2/(1-x^2-y^2)", (-1.0, 1.0, -1.0, 1.0), 0.5, 0.0)
    assert k == pytest.approx(-1.0, abs=1e-9)


def test_check_anosov_report():
    report = anosov_geo.check_anosov((CONFIGS / "hyperbolic.json").read_text(), samples=3, seed=2)
    jsonschema.validate(report, json.loads((SCHEMAS / "report.schema.json").read_text()))
    assert report["verdict"] == "anosov"
    assert report["sample_count"] == 3
    assert report["seed"] == 2
