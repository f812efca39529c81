"""Exact partial differentiation and best-effort simplification."""

from __future__ import annotations

from .expr import (
    ONE,
    TWO,
    ZERO,
    Add,
    Const,
    CoordIndex,
    Div,
    Expr,
    Func,
    Mul,
    Neg,
    Pow,
    Sub,
    Var,
    add,
    div,
    func,
    mul,
    neg,
    power,
    sub,
)

_DIFF_CACHE: dict = {}
_SIMPLIFY_CACHE: dict = {}


def diff(f: Expr, v: CoordIndex) -> Expr:
    """Symbolic partial derivative of ``f`` with respect to coordinate ``v``.

    Results are memoised per (node, coordinate) and built with the
    simplifying constructors, so derivatives of constants vanish exactly.
    """
    if v not in f.variables:
        return ZERO
    key = (f, v)
    hit = _DIFF_CACHE.get(key)
    if hit is not None:
        return hit
    out = _diff(f, v)
    _DIFF_CACHE[key] = out
    return out


def _diff(f: Expr, v: CoordIndex) -> Expr:
    if isinstance(f, Var):
        return ONE if f.coord == v else ZERO
    if isinstance(f, Const):
        return ZERO
    if isinstance(f, Add):
        return add(diff(f.args[0], v), diff(f.args[1], v))
    if isinstance(f, Sub):
        return sub(diff(f.args[0], v), diff(f.args[1], v))
    if isinstance(f, Neg):
        return neg(diff(f.args[0], v))
    if isinstance(f, Mul):
        a, b = f.args
        return add(mul(diff(a, v), b), mul(a, diff(b, v)))
    if isinstance(f, Div):
        a, b = f.args
        da, db = diff(a, v), diff(b, v)
        if db is ZERO:
            return div(da, b)
        b2 = power(b, TWO)
        if da is ZERO:
            return neg(div(mul(a, db), b2))
        return div(sub(mul(da, b), mul(a, db)), b2)
    if isinstance(f, Pow):
        base, ex = f.args
        if isinstance(ex, Const):
            c = ex.value
            return mul(mul(ex, power(base, Const(c - 1))), diff(base, v))
        # u^w (w' log u + w u'/u)
        du, dw = diff(base, v), diff(ex, v)
        inner = add(mul(dw, func("log", base)), div(mul(ex, du), base))
        return mul(f, inner)
    if isinstance(f, Func):
        (u,) = f.args
        du = diff(u, v)
        name = f.name
        if name == "sqrt":
            return div(du, mul(TWO, f))
        if name == "sin":
            return mul(func("cos", u), du)
        if name == "cos":
            return neg(mul(func("sin", u), du))
        if name == "exp":
            return mul(f, du)
        if name == "log":
            return div(du, u)
    raise TypeError(f"cannot differentiate {f!r}")


def simplify(f: Expr) -> Expr:
    """Rebuild ``f`` bottom-up through the simplifying constructors.

    Value preserving (up to rounding of folded constants); not a
    canonical form.
    """
    hit = _SIMPLIFY_CACHE.get(f)
    if hit is not None:
        return hit
    if isinstance(f, (Const, Var)):
        out = f
    elif isinstance(f, Func):
        out = func(f.name, simplify(f.args[0]))
    elif isinstance(f, Neg):
        out = neg(simplify(f.args[0]))
    else:
        a, b = (simplify(arg) for arg in f.args)
        op = {Add: add, Sub: sub, Mul: mul, Div: div, Pow: power}[type(f)]
        out = op(a, b)
    _SIMPLIFY_CACHE[f] = out
    return out
