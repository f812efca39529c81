"""Render expressions in the input grammar (output re-parses to the same tree)."""

from __future__ import annotations

from .expr import Add, Const, Div, Expr, Func, Mul, Neg, Pow, Sub, Var


def format_number(v: float) -> str:
    if v == int(v) and abs(v) < 1e15:
        return str(int(v))
    return repr(v)


def _prec(e: Expr) -> int:
    if isinstance(e, Const) and e.value < 0:
        return Neg.precedence
    return e.precedence


def to_text(e: Expr) -> str:
    if isinstance(e, Const):
        return format_number(e.value)
    if isinstance(e, Var):
        return str(e.coord)
    if isinstance(e, Func):
        return f"{e.name}({to_text(e.args[0])})"
    if isinstance(e, Neg):
        (a,) = e.args
        inner = to_text(a)
        # "-a*b" parses as -(a*b); sums and nested signs need parentheses.
        if _prec(a) <= Neg.precedence:
            inner = f"({inner})"
        return f"-{inner}"
    a, b = e.args
    left, right = to_text(a), to_text(b)
    pa, pb = _prec(a), _prec(b)
    if isinstance(e, (Add, Sub)):
        if pb <= Neg.precedence:
            right = f"({right})"
        op = " + " if isinstance(e, Add) else " - "
        return left + op + right
    if isinstance(e, (Mul, Div)):
        if pa < Mul.precedence:
            left = f"({left})"
        if pb <= Mul.precedence:
            right = f"({right})"
        return left + ("*" if isinstance(e, Mul) else "/") + right
    if isinstance(e, Pow):
        if pa <= Pow.precedence:
            left = f"({left})"
        if pb < Pow.precedence:
            right = f"({right})"
        return f"{left}^{right}"
    raise TypeError(f"cannot print {e!r}")
