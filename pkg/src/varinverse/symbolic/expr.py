"""Expression trees for scalar fields on the slit tangent bundle.

Nodes are hash-consed: two structurally identical trees are the same
Python object, so ``a is b`` is structural equality and derivative /
evaluation caches keyed on nodes share work across a whole computation.

The node classes (``Add``, ``Mul``, ...) construct raw trees exactly as
written.  The lower-case helpers (``add``, ``mul``, ...) apply local
rewrites (constant folding, identity elimination, sign pulling) and are
what the calculus code uses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Union

Number = Union[int, float]


class Kind(Enum):
    BASE = "x"
    FIBER = "y"


@dataclass(frozen=True, order=True)
class CoordIndex:
    """A coordinate ``x^i`` (``Kind.BASE``) or ``y^i`` (``Kind.FIBER``), 1-based."""

    kind: Kind
    index: int

    def __post_init__(self):
        if self.index < 1:
            raise ValueError(f"coordinate index must be >= 1, got {self.index}")

    def flat(self, n: int) -> int:
        """Position in the frame (dx^1..dx^n, dy^1..dy^n), 0-based."""
        return self.index - 1 + (n if self.kind is Kind.FIBER else 0)

    @staticmethod
    def from_flat(a: int, n: int) -> "CoordIndex":
        if a < n:
            return CoordIndex(Kind.BASE, a + 1)
        return CoordIndex(Kind.FIBER, a - n + 1)

    def __str__(self):
        return f"{self.kind.value}{self.index}"


def xi(i: int) -> CoordIndex:
    return CoordIndex(Kind.BASE, i)


def yi(i: int) -> CoordIndex:
    return CoordIndex(Kind.FIBER, i)


_TABLE: dict = {}

FUNCTIONS = ("sqrt", "sin", "cos", "exp", "log")


def _intern(key, cls, args, payload=None):
    node = _TABLE.get(key)
    if node is not None:
        return node
    node = object.__new__(cls)
    node.args = args
    node.payload = payload
    node._hash = hash(key[:1] + tuple(a._hash for a in args) + (payload,)) if args else hash(key)
    node._vars = None
    return _TABLE.setdefault(key, node)


class Expr:
    """Immutable scalar field expression."""

    __slots__ = ("args", "payload", "_hash", "_vars")
    precedence = 100

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return self is other

    def __ne__(self, other):
        return self is not other

    def __reduce__(self):
        # Re-intern on unpickle.
        return (_rebuild, (type(self).__name__, self.args, self.payload))

    # Arithmetic builds simplified trees.
    def __add__(self, other):
        return add(self, as_expr(other))

    def __radd__(self, other):
        return add(as_expr(other), self)

    def __sub__(self, other):
        return sub(self, as_expr(other))

    def __rsub__(self, other):
        return sub(as_expr(other), self)

    def __mul__(self, other):
        return mul(self, as_expr(other))

    def __rmul__(self, other):
        return mul(as_expr(other), self)

    def __truediv__(self, other):
        return div(self, as_expr(other))

    def __rtruediv__(self, other):
        return div(as_expr(other), self)

    def __pow__(self, other):
        return power(self, as_expr(other))

    def __rpow__(self, other):
        return power(as_expr(other), self)

    def __neg__(self):
        return neg(self)

    def __str__(self):
        from .printer import to_text

        return to_text(self)

    def __repr__(self):
        inner = ", ".join(repr(a) for a in self.args)
        return f"{type(self).__name__}({inner})"

    @property
    def variables(self) -> frozenset:
        """Coordinates the expression depends on syntactically."""
        if self._vars is None:
            stack = [(self, False)]
            while stack:
                node, expanded = stack.pop()
                if node._vars is not None:
                    continue
                if not expanded:
                    stack.append((node, True))
                    stack.extend((a, False) for a in node.args if a._vars is None)
                    continue
                if isinstance(node, Var):
                    node._vars = frozenset([node.coord])
                else:
                    acc = frozenset()
                    for a in node.args:
                        acc |= a._vars
                    node._vars = acc
        return self._vars

    @property
    def max_index(self) -> int:
        return max((c.index for c in self.variables), default=0)


class Const(Expr):
    __slots__ = ()
    precedence = 100

    def __new__(cls, value: Number):
        value = float(value)
        if value == 0.0:
            value = 0.0  # fold -0.0
        return _intern((cls, value), cls, (), value)

    @property
    def value(self) -> float:
        return self.payload

    def __repr__(self):
        return f"Const({self.payload!r})"


class Var(Expr):
    __slots__ = ()
    precedence = 100

    def __new__(cls, coord: CoordIndex):
        return _intern((cls, coord), cls, (), coord)

    @property
    def coord(self) -> CoordIndex:
        return self.payload

    def __repr__(self):
        return f"Var({self.payload})"


class Add(Expr):
    __slots__ = ()
    precedence = 1

    def __new__(cls, left, right):
        return _intern((cls, left, right), cls, (left, right))


class Sub(Expr):
    __slots__ = ()
    precedence = 1

    def __new__(cls, left, right):
        return _intern((cls, left, right), cls, (left, right))


class Neg(Expr):
    __slots__ = ()
    precedence = 2

    def __new__(cls, arg):
        return _intern((cls, arg), cls, (arg,))


class Mul(Expr):
    __slots__ = ()
    precedence = 3

    def __new__(cls, left, right):
        return _intern((cls, left, right), cls, (left, right))


class Div(Expr):
    __slots__ = ()
    precedence = 3

    def __new__(cls, left, right):
        return _intern((cls, left, right), cls, (left, right))


class Pow(Expr):
    __slots__ = ()
    precedence = 4

    def __new__(cls, base, exponent):
        return _intern((cls, base, exponent), cls, (base, exponent))


class Func(Expr):
    __slots__ = ()
    precedence = 100

    def __new__(cls, name: str, arg):
        if name not in FUNCTIONS:
            raise ValueError(f"unknown function {name!r}")
        return _intern((cls, name, arg), cls, (arg,), name)

    @property
    def name(self) -> str:
        return self.payload

    def __repr__(self):
        return f"Func({self.payload!r}, {self.args[0]!r})"


def _rebuild(cls_name, args, payload):
    cls = globals()[cls_name]
    if cls in (Const, Var):
        return cls(payload)
    if cls is Func:
        return Func(payload, *args)
    return cls(*args)


ZERO = Const(0)
ONE = Const(1)
TWO = Const(2)
HALF = Const(0.5)


def as_expr(value) -> Expr:
    if isinstance(value, Expr):
        return value
    if isinstance(value, CoordIndex):
        return Var(value)
    if isinstance(value, (int, float)):
        return Const(value)
    raise TypeError(f"cannot convert {type(value).__name__} to an expression")


def const_value(e: Expr):
    return e.payload if isinstance(e, Const) else None


def is_zero(e: Expr) -> bool:
    return e is ZERO


# ---------------------------------------------------------------------------
# Simplifying constructors


def add(a: Expr, b: Expr) -> Expr:
    ca, cb = const_value(a), const_value(b)
    if ca is not None and cb is not None:
        return Const(ca + cb)
    if ca == 0.0:
        return b
    if cb == 0.0:
        return a
    if isinstance(b, Neg):
        return sub(a, b.args[0])
    if isinstance(a, Neg):
        return sub(b, a.args[0])
    if a is b:
        return mul(TWO, a)
    return Add(a, b)


def sub(a: Expr, b: Expr) -> Expr:
    ca, cb = const_value(a), const_value(b)
    if ca is not None and cb is not None:
        return Const(ca - cb)
    if cb == 0.0:
        return a
    if a is b:
        return ZERO
    if ca == 0.0:
        return neg(b)
    if isinstance(b, Neg):
        return add(a, b.args[0])
    if isinstance(a, Neg):
        return neg(add(a.args[0], b))
    return Sub(a, b)


def neg(a: Expr) -> Expr:
    ca = const_value(a)
    if ca is not None:
        return Const(-ca)
    if isinstance(a, Neg):
        return a.args[0]
    if isinstance(a, Sub):
        return Sub(a.args[1], a.args[0])
    return Neg(a)


def mul(a: Expr, b: Expr) -> Expr:
    ca, cb = const_value(a), const_value(b)
    if ca is not None and cb is not None:
        return Const(ca * cb)
    if ca == 0.0 or cb == 0.0:
        return ZERO
    if ca == 1.0:
        return b
    if cb == 1.0:
        return a
    if ca == -1.0:
        return neg(b)
    if cb == -1.0:
        return neg(a)
    if isinstance(a, Neg):
        return neg(mul(a.args[0], b))
    if isinstance(b, Neg):
        return neg(mul(a, b.args[0]))
    if cb is not None:
        a, b, ca, cb = b, a, cb, ca
    if ca is not None and isinstance(b, Mul):
        inner = const_value(b.args[0])
        if inner is not None:
            return mul(Const(ca * inner), b.args[1])
    return Mul(a, b)


def div(a: Expr, b: Expr) -> Expr:
    ca, cb = const_value(a), const_value(b)
    if cb is not None and cb != 0.0 and ca is not None:
        return Const(ca / cb)
    if ca == 0.0:
        return ZERO
    if cb == 1.0:
        return a
    if cb == -1.0:
        return neg(a)
    if a is b:
        return ONE
    if isinstance(a, Neg):
        return neg(div(a.args[0], b))
    if isinstance(b, Neg):
        return neg(div(a, b.args[0]))
    return Div(a, b)


def power(a: Expr, b: Expr) -> Expr:
    ca, cb = const_value(a), const_value(b)
    if cb == 0.0:
        return ONE
    if cb == 1.0:
        return a
    if ca == 1.0:
        return ONE
    if ca is not None and cb is not None:
        if ca > 0 or (cb == int(cb) and (ca != 0 or cb > 0)):
            return Const(ca**cb)
    return Pow(a, b)


_FOLD = {
    "sqrt": (math.sqrt, lambda v: v >= 0),
    "sin": (math.sin, lambda v: True),
    "cos": (math.cos, lambda v: True),
    "exp": (math.exp, lambda v: v < 700),
    "log": (math.log, lambda v: v > 0),
}


def func(name: str, a: Expr) -> Expr:
    ca = const_value(a)
    if ca is not None:
        fn, ok = _FOLD[name]
        if ok(ca):
            return Const(fn(ca))
    return Func(name, a)


def sqrt(a):
    return func("sqrt", as_expr(a))


def sin(a):
    return func("sin", as_expr(a))


def cos(a):
    return func("cos", as_expr(a))


def exp(a):
    return func("exp", as_expr(a))


def log(a):
    return func("log", as_expr(a))


def total(terms: Iterable[Expr]) -> Expr:
    """Sum of expressions, built as a balanced tree to keep depth logarithmic."""
    items = [t for t in terms if t is not ZERO]
    if not items:
        return ZERO
    while len(items) > 1:
        paired = [add(items[i], items[i + 1]) for i in range(0, len(items) - 1, 2)]
        if len(items) % 2:
            paired.append(items[-1])
        items = paired
    return items[0]


def x(i: int) -> Var:
    return Var(xi(i))


def y(i: int) -> Var:
    return Var(yi(i))


def coordinate(a: int, n: int) -> Var:
    """Coordinate variable for flat frame index ``a`` in dimension ``n``."""
    return Var(CoordIndex.from_flat(a, n))
