"""Expression kernel: parsing, printing, differentiation and homogeneity."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from varinverse.symbolic import (
    Add,
    Const,
    Div,
    DomainError,
    ExprSyntaxError,
    Func,
    IndexOutOfRange,
    InsufficientSamples,
    Mul,
    Neg,
    Pow,
    Sub,
    Var,
    diff,
    eval_at,
    evaluate,
    homogeneity_degree,
    parse_expr,
    simplify,
    to_text,
    xi,
    yi,
)
from varinverse.sampling import PhasePoint, sample_points

from conftest import fd_partial

# scalar fields appearing anywhere in the catalog, plus a few harder ones
CORPUS_2D = [
    "y1^2 + y2^2",
    "sqrt(y1^2 + y2^2)",
    "(y1^2 + y2^2)/x2^2",
    "sqrt(y1^2 + y2^2)/x2",
    "-y1*y2/x2",
    "(y1^2 - y2^2)/(2*x2)",
    "y2/sqrt(y1^2 + y2^2)",
    "x1*y1/sqrt(y1^2 + y2^2)",
    "y1^2 + (x1^2 + 1)*y2^2",
    "y1*y2",
    "x1 + x2",
    "sin(x1)*cos(y2) + exp(-x2*y1)",
    "(x1^2 + 1)^(-1/2)*y1^3",
    "log(1 + y1^2)*x2",
]


def test_parse_precedence():
    e = parse_expr("-y1*y2/x2", 2)
    assert isinstance(e, Neg)
    assert eval_at(parse_expr("2^3^2", 1), PhasePoint([1.0], [1.0])) == 512.0
    assert eval_at(parse_expr("-y1^2", 1), PhasePoint([0.0], [3.0])) == -9.0
    assert eval_at(parse_expr("2*-y1", 1), PhasePoint([0.0], [3.0])) == -6.0


@pytest.mark.parametrize("text", ["y1 +", "(y1", "y1 y2", "foo(y1)", "z1", "y1 $ 2", "x1é"])
def test_parse_errors(text):
    with pytest.raises(ExprSyntaxError):
        parse_expr(text, 2)


def test_index_out_of_range():
    with pytest.raises(IndexOutOfRange):
        parse_expr("y3", 2)
    with pytest.raises(IndexOutOfRange):
        parse_expr("x0", 2)


@pytest.mark.parametrize("text", CORPUS_2D)
def test_derivative_matches_finite_differences(text):
    f = parse_expr(text, 2)
    s = sample_points(2, 20, box_x=[[-1, 1], [0.5, 2]])
    fun = lambda X, Y: evaluate(f, type(s)(X, Y, y_min=0.0))
    for a, c in enumerate([xi(1), xi(2), yi(1), yi(2)]):
        exact = evaluate(diff(f, c), s)
        approx = fd_partial(fun, s.X, s.Y, a)
        scale = 1 + np.abs(exact)
        assert np.all(np.abs(exact - approx) <= 1e-6 * scale), (text, c)


@pytest.mark.parametrize("text", CORPUS_2D[:8])
def test_second_derivatives_commute(text):
    f = parse_expr(text, 2)
    s = sample_points(2, 10, box_x=[[-1, 1], [0.5, 2]])
    for u in (xi(1), xi(2), yi(1), yi(2)):
        for v in (xi(1), yi(2)):
            a = evaluate(diff(diff(f, u), v), s)
            b = evaluate(diff(diff(f, v), u), s)
            assert np.allclose(a, b, rtol=1e-12, atol=1e-12)


def test_simplify_rules():
    y1 = parse_expr("y1", 1)
    assert simplify(parse_expr("0*y1 + 1*y1", 1)) == y1
    assert simplify(parse_expr("y1 - 0", 1)) == y1
    assert diff(parse_expr("x1", 1), yi(1)) == Const(0.0)


def test_domain_error_reports_point():
    f = parse_expr("log(y1)", 1)
    with pytest.raises(DomainError):
        eval_at(f, PhasePoint([0.0], [-1.0]))


def test_homogeneity_degrees():
    s = sample_points(2, 20)
    assert homogeneity_degree(parse_expr("y1^2 + y2^2", 2), s) == 2
    assert homogeneity_degree(parse_expr("sqrt(y1^2 + y2^2)", 2), s) == 1
    assert homogeneity_degree(parse_expr("y2/sqrt(y1^2 + y2^2)", 2), s) == 0
    assert homogeneity_degree(parse_expr("sqrt(y1^2 + y2^2)^3", 2), s) == 3
    assert homogeneity_degree(parse_expr("(y1^2 + y2^2)^(1/4)", 2), s) == Fraction(1, 2)
    assert homogeneity_degree(parse_expr("y1^2 + y2", 2), s) is None
    with pytest.raises(InsufficientSamples):
        homogeneity_degree(parse_expr("0*y1", 2), s)


# ---------------------------------------------------------------------------
# property tests

_leaves = st.one_of(
    st.sampled_from([Var(xi(1)), Var(xi(2)), Var(yi(1)), Var(yi(2))]),
    st.floats(min_value=0.0, max_value=50.0, allow_nan=False).map(Const),
)


def _node(children):
    binary = st.sampled_from([Add, Sub, Mul, Div, Pow])
    return st.one_of(
        st.tuples(binary, children, children).map(lambda t: t[0](t[1], t[2])),
        children.map(Neg),
        st.tuples(st.sampled_from(["sin", "cos", "exp", "sqrt", "log"]), children).map(
            lambda t: Func(t[0], t[1])),
    )


trees = st.recursive(_leaves, _node, max_leaves=12)


@settings(max_examples=300, deadline=None)
@given(trees)
def test_print_parse_round_trip(e):
    assert parse_expr(to_text(e), 2) == e


_safe_leaves = st.one_of(
    st.sampled_from([Var(xi(1)), Var(xi(2)), Var(yi(1)), Var(yi(2))]),
    st.integers(min_value=0, max_value=4).map(lambda v: Const(float(v))),
)


def _safe_node(children):
    return st.one_of(
        st.tuples(st.sampled_from([Add, Sub, Mul]), children, children).map(lambda t: t[0](t[1], t[2])),
        children.map(Neg),
        st.tuples(st.sampled_from(["sin", "cos"]), children).map(lambda t: Func(t[0], t[1])),
    )


polys = st.recursive(_safe_leaves, _safe_node, max_leaves=10)


@settings(max_examples=150, deadline=None)
@given(polys)
def test_simplify_preserves_values(e):
    s = sample_points(2, 8, seed=3)
    assert np.allclose(evaluate(simplify(e), s), evaluate(e, s), rtol=1e-12, atol=1e-12)


@settings(max_examples=100, deadline=None)
@given(polys, st.sampled_from([xi(1), xi(2), yi(1), yi(2)]))
def test_diff_matches_fd_on_random_trees(e, c):
    s = sample_points(2, 6, seed=5)
    fun = lambda X, Y: evaluate(e, type(s)(X, Y, y_min=0.0))
    exact = evaluate(diff(e, c), s)
    approx = fd_partial(fun, s.X, s.Y, c.flat(2))
    assert np.all(np.abs(exact - approx) <= 1e-6 * (1 + np.abs(exact) + np.abs(evaluate(e, s))))
