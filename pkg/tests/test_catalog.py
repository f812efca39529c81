"""Builtin problems, metric-to-spray construction and the problem-file loader."""

import json

import numpy as np
import pytest

from varinverse import fn_calculus as fn
from varinverse.catalog import (
    SchemaError,
    SingularMetric,
    UnknownExample,
    builtin,
    builtin_names,
    load_problem,
    problem_from_dict,
    riemannian_spray,
)
from varinverse.geometry import is_spray
from varinverse.helmholtz import (
    check_lagrangian,
    finsler_metrizability_check,
    hamel_check,
    helmholtz_residuals,
    projective_metrizability_check,
)
from varinverse.sampling import sample_points
from varinverse.symbolic import ExprSyntaxError, evaluate

RUNNERS = {
    "check": lambda P, c, s: helmholtz_residuals(P.spray, c.theta(P.n), s),
    "projective": lambda P, c, s: projective_metrizability_check(P.spray, c.theta(P.n), s),
    "finsler": lambda P, c, s: finsler_metrizability_check(P.spray, c.theta(P.n), s),
    "hamel": lambda P, c, s: hamel_check(P.spray, c.scalar, s),
}


def test_builtin_list_and_unknown():
    assert builtin_names()[:3] == ["flat2d", "poincare-halfplane", "damped1d"]
    with pytest.raises(UnknownExample):
        builtin("nope")
    with pytest.raises(UnknownExample):
        builtin("flat2d").candidate("nope")


@pytest.mark.parametrize("name", ["flat2d", "poincare-halfplane", "damped1d", "warped2d"])
def test_expected_verdict_regression(name):
    P = builtin(name)
    s = P.samples()
    seen = 0
    for c in P.candidates:
        for mode, verdict in (c.expected or {}).items():
            assert RUNNERS[mode](P, c, s).verdict == verdict, (name, c.name, mode)
            seen += 1
    assert seen >= 1


def test_sampling_respects_charts():
    s = builtin("poincare-halfplane").samples()
    assert np.all(s.X[:, 1] >= 0.5)
    s = builtin("damped1d").samples()
    assert np.all(s.Y[:, 0] >= 0.2)


def test_riemannian_spray_halfplane_matches_builtin():
    s = builtin("poincare-halfplane").samples()
    S = riemannian_spray([["1/x2^2", "0"], ["0", "1/x2^2"]], s)
    hp = builtin("poincare-halfplane").spray
    for a, b in zip(S.G, hp.G):
        assert np.allclose(evaluate(a, s), evaluate(b, s), atol=1e-12)


def test_riemannian_spray_warped_is_lagrangian():
    s = sample_points(2, 20)
    S = riemannian_spray([["1", "0"], ["0", "x1^2 + 1"]], s)
    assert is_spray(S, s)
    r = check_lagrangian(S, builtin("warped2d").candidate("energy").scalar, s)
    assert r.residual(r.conditions[0].name) <= 1e-8


def test_riemannian_spray_errors():
    s = sample_points(2, 20)
    with pytest.raises(SingularMetric):
        riemannian_spray([["x1^2", "0"], ["0", "1"]], sample_points(2, 20, box_x=[[-1e-7, 1e-7], [0, 1]]))
    with pytest.raises(ValueError):
        riemannian_spray([["y1", "0"], ["0", "1"]], s)
    with pytest.raises(ValueError):
        riemannian_spray([["1", "x1"], ["0", "1"]], s)
    with pytest.raises(ValueError):
        riemannian_spray([["1"] * 4] * 4)


def test_riemannian_spray_three_dimensional_bracket():
    s = sample_points(3, 20)
    S = riemannian_spray([["1", "0", "0"], ["0", "exp(x1)", "0"], ["0", "0", "x2^2 + 1"]], s)
    res = fn.max_abs(fn.lie_bracket(S.liouville, S.field) - S.field, s)[0]
    assert res <= 1e-10


MINIMAL = {"name": "mini", "n": 2, "spray": {"G": ["0", "0"]},
           "candidates": [{"name": "E", "kind": "Lagrangian", "expr": "y1^2 + y2^2"}]}


def test_load_minimal_file(tmp_path):
    p = tmp_path / "p.json"
    p.write_text(json.dumps(MINIMAL))
    P = load_problem(p)
    assert P.n == 2 and P.candidate("E").kind == "Lagrangian"
    assert helmholtz_residuals(P.spray, P.candidate("E").theta(2), P.samples()).passed


def test_load_metric_file(tmp_path):
    data = {"name": "hp", "n": 2, "spray": {"metric": [["1/x2^2", "0"], ["0", "1/x2^2"]]},
            "candidates": [{"kind": "OneForm", "components": ["2*y1/x2^2", "2*y2/x2^2"]}],
            "sampling": {"box_x": [[-1, 1], [0.5, 2]], "seed": 5, "count": 24}}
    p = tmp_path / "hp.json"
    p.write_text(json.dumps(data))
    P = load_problem(p)
    s = P.samples()
    assert s.m == 24 and np.all(s.X[:, 1] >= 0.5)
    assert helmholtz_residuals(P.spray, P.candidates[0].theta(2), s).passed


@pytest.mark.parametrize("patch,path,msg", [
    ({"spray": {"G": ["0", "0", "0"]}}, "G", "expected 2 entries"),
    ({"extra": 1}, "extra", "unknown key"),
    ({"n": 0}, "n", "positive"),
    ({"spray": {"G": ["0", "0"], "metric": [["1"]]}}, "spray", "exactly one"),
    ({"candidates": [{"kind": "Bogus", "expr": "y1"}]}, "candidates[0].kind", "one of"),
    ({"candidates": [{"kind": "OneForm", "components": ["y1"]}]}, "candidates[0].components", "2 entries"),
    ({"candidates": [{"kind": "Lagrangian", "expr": "y1", "colour": "red"}]}, "candidates[0].colour", "unknown"),
    ({"sampling": {"box_x": [[1, 0], [0, 1]]}}, "sampling.box_x[0]", "lo < hi"),
    ({"sampling": {"dpi": 3}}, "sampling.dpi", "unknown"),
])
def test_schema_errors(patch, path, msg):
    data = dict(MINIMAL, **patch)
    with pytest.raises(SchemaError) as exc:
        problem_from_dict(data)
    assert exc.value.path == path and msg in str(exc.value)


def test_syntax_error_forwarded():
    with pytest.raises(ExprSyntaxError):
        problem_from_dict(dict(MINIMAL, spray={"G": ["y1 +", "0"]}))
