"""Scalar fields on TM minus the zero section: parse, differentiate, evaluate."""

from .calculus import diff, simplify
from .evaluate import DomainError, Program, eval_at, evaluate, evaluate_many
from .expr import (
    HALF,
    ONE,
    TWO,
    ZERO,
    Add,
    Const,
    CoordIndex,
    Div,
    Expr,
    Func,
    Kind,
    Mul,
    Neg,
    Pow,
    Sub,
    Var,
    as_expr,
    coordinate,
    cos,
    exp,
    log,
    sin,
    sqrt,
    total,
    x,
    xi,
    y,
    yi,
)
from .homogeneity import InsufficientSamples, euler_derivative, homogeneity_degree
from .parser import ExprSyntaxError, IndexOutOfRange, parse_expr
from .printer import to_text

ScalarField = Expr

__all__ = [
    "Add", "Const", "CoordIndex", "Div", "DomainError", "Expr", "ExprSyntaxError", "Func",
    "HALF", "IndexOutOfRange", "InsufficientSamples", "Kind", "Mul", "Neg", "ONE", "Pow", "Program",
    "ScalarField", "Sub", "TWO", "Var", "ZERO", "as_expr", "coordinate", "cos", "diff",
    "euler_derivative", "eval_at", "evaluate", "evaluate_many", "exp", "homogeneity_degree",
    "log", "parse_expr", "simplify", "sin", "sqrt", "to_text", "total", "x", "xi", "y", "yi",
]
