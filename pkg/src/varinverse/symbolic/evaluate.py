"""Vectorised numeric evaluation of expression DAGs."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..sampling import PhasePoint, SampleSet
from .expr import Add, Const, Div, Expr, Func, Kind, Mul, Neg, Pow, Sub, Var


class DomainError(ArithmeticError):
    """Evaluation hit a singular sub-expression (log/sqrt/division/power)."""

    def __init__(self, expr: Expr, point: PhasePoint, reason: str):
        super().__init__(f"{reason} in {expr} at x={list(point.x)}, y={list(point.y)}")
        self.expr = expr
        self.point = point
        self.reason = reason


def _topological(roots: Sequence[Expr]) -> list:
    order, seen = [], set()
    for root in roots:
        if root in seen:
            continue
        stack = [(root, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                order.append(node)
                continue
            if node in seen:
                continue
            seen.add(node)
            stack.append((node, True))
            for a in node.args:
                if a not in seen:
                    stack.append((a, False))
    return order


_FUNCS = {"sqrt": np.sqrt, "sin": np.sin, "cos": np.cos, "exp": np.exp, "log": np.log}


class Program:
    """A fixed evaluation order for a list of expressions.

    Compiling once pays off when the same fields are evaluated many times,
    as in the geodesic integrator.
    """

    def __init__(self, exprs: Sequence[Expr]):
        self.exprs = list(exprs)
        self.order = _topological(self.exprs)

    def __call__(self, samples: SampleSet) -> np.ndarray:
        m, n = samples.m, samples.n
        out = np.empty((len(self.exprs), m))
        if not self.exprs:
            return out
        X, Y = samples.X, samples.Y
        values: dict = {}

        def fail(node, mask, reason):
            i = int(np.flatnonzero(mask)[0])
            raise DomainError(node, samples.point(i), reason)

        for node in self.order:
            if isinstance(node, Const):
                val = np.full(m, node.value)
            elif isinstance(node, Var):
                c = node.coord
                if c.index > n:
                    raise IndexError(f"{c} out of range for dimension {n}")
                val = (X if c.kind is Kind.BASE else Y)[:, c.index - 1]
            else:
                args = [values[a] for a in node.args]
                if isinstance(node, Add):
                    val = args[0] + args[1]
                elif isinstance(node, Sub):
                    val = args[0] - args[1]
                elif isinstance(node, Mul):
                    val = args[0] * args[1]
                elif isinstance(node, Neg):
                    val = -args[0]
                elif isinstance(node, Div):
                    bad = args[1] == 0
                    if bad.any():
                        fail(node, bad, "division by zero")
                    val = args[0] / args[1]
                elif isinstance(node, Pow):
                    base, ex = args
                    bad = ((base < 0) & (ex != np.round(ex))) | ((base == 0) & (ex < 0))
                    if bad.any():
                        fail(node, bad, "invalid power")
                    with np.errstate(over="ignore"):
                        val = np.power(base, ex)
                elif isinstance(node, Func):
                    (a,) = args
                    name = node.name
                    if name == "sqrt" and (a < 0).any():
                        fail(node, a < 0, "sqrt of negative value")
                    if name == "log" and (a <= 0).any():
                        fail(node, a <= 0, "log of non-positive value")
                    with np.errstate(over="ignore"):
                        val = _FUNCS[name](a)
                else:
                    raise TypeError(f"cannot evaluate {node!r}")
            values[node] = val
        for k, e in enumerate(self.exprs):
            out[k] = values[e]
        return out


def evaluate_many(exprs: Sequence[Expr], samples: SampleSet) -> np.ndarray:
    """Evaluate expressions at every sample point; returns shape (len(exprs), m).

    Shared sub-expressions are evaluated once.  Raises ``DomainError`` at
    the first singular node, naming the node and the offending point.
    """
    return Program(exprs)(samples)


def evaluate(f: Expr, samples: SampleSet) -> np.ndarray:
    """Values of ``f`` at all sample points, shape (m,)."""
    return evaluate_many([f], samples)[0]


def eval_at(f: Expr, p: PhasePoint) -> float:
    """Value of ``f`` at a single phase point."""
    return float(evaluate(f, SampleSet([p.x], [p.y], y_min=p.y_min))[0])
