"""Frolicher-Nijenhuis calculus on TM minus the zero section.

Everything lives in the coordinate frame (d/dx^1..d/dx^n, d/dy^1..d/dy^n),
indexed 0..2n-1 ("flat" indices).  A k-form stores one scalar field per
strictly increasing index tuple and evaluates on frame vectors by the
determinant convention, so ``dx^0 ^ dx^1`` has component 1 at ``(0, 1)``.
A vector-valued l-form stores one field per ``(a, I)``: output index ``a``
and increasing argument tuple ``I``.  Vector fields are the l = 0 case and
(1,1) tensors the l = 1 case, with ``A[a, (j,)]`` the row-a, column-j entry.

All operators are symbolic; the numeric helpers at the bottom evaluate the
results at sample points.
"""

from __future__ import annotations

from collections import defaultdict
from itertools import combinations
from typing import Dict, Sequence, Tuple, Union

import numpy as np

from .sampling import SampleSet
from .symbolic import ZERO, CoordIndex, Expr, as_expr, diff, evaluate_many, parse_expr, total

MAX_FORM_DEGREE = 3
MAX_VECTOR_DEGREE = 2

Scalar = Union[Expr, int, float]


class DegreeOverflow(ValueError):
    """A result would exceed the supported form degree."""


class UnsupportedKind(TypeError):
    """The operator is not defined for this kind of object."""


def _sort_sign(idx: Sequence[int]) -> Tuple[int, tuple]:
    """Sign of the permutation sorting ``idx`` and the sorted tuple (0 on repeats)."""
    idx = list(idx)
    sign = 1
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
    for i in range(1, len(idx)):
        if idx[i] == idx[i - 1]:
            return 0, ()
    return sign, tuple(idx)


def _shuffles(J: tuple, p: int):
    """Yield (sign, first p entries, remaining entries) over all (p, rest)-shuffles."""
    positions = range(len(J))
    for P in combinations(positions, p):
        Q = [i for i in positions if i not in P]
        sign, _ = _sort_sign(list(P) + Q)
        yield sign, tuple(J[i] for i in P), tuple(J[i] for i in Q)


class _Acc:
    """Collects signed terms per component and sums them at the end."""

    def __init__(self, vector: bool):
        self.vector = vector
        self.terms: Dict[tuple, list] = defaultdict(list)

    def add(self, key, expr: Expr, sign: int = 1):
        if expr is ZERO:
            return
        if self.vector:
            a, idx = key
            s, idx = _sort_sign(idx)
            key = (a, idx)
        else:
            s, key = _sort_sign(key)
        if s == 0:
            return
        self.terms[key].append(expr if s * sign > 0 else -expr)

    def build(self) -> dict:
        return {k: total(v) for k, v in self.terms.items()}


def _scalar(c: Scalar) -> Expr:
    return as_expr(c)


class FormField:
    """A k-form (0 <= k <= 3) with scalar-field components."""

    __slots__ = ("n", "degree", "comps")

    def __init__(self, n: int, degree: int, comps: dict = None):
        if not 0 <= degree <= MAX_FORM_DEGREE:
            raise DegreeOverflow(f"form degree {degree} outside 0..{MAX_FORM_DEGREE}")
        self.n = n
        self.degree = degree
        acc = _Acc(vector=False)
        for idx, e in (comps or {}).items():
            idx = tuple(idx)
            if len(idx) != degree or any(not 0 <= a < 2 * n for a in idx):
                raise ValueError(f"bad index {idx} for a {degree}-form in dimension {n}")
            acc.add(idx, _coerce(e, n))
        self.comps = {k: v for k, v in acc.build().items() if v is not ZERO}

    @classmethod
    def scalar(cls, f: Scalar, n: int) -> "FormField":
        return cls(n, 0, {(): _scalar(f)})

    @property
    def dim(self) -> int:
        return 2 * self.n

    def __getitem__(self, idx) -> Expr:
        s, key = _sort_sign(idx)
        if s == 0:
            return ZERO
        e = self.comps.get(key, ZERO)
        return e if s > 0 or e is ZERO else -e

    def _check(self, other: "FormField"):
        if not isinstance(other, FormField) or other.n != self.n or other.degree != self.degree:
            raise ValueError("forms must share dimension and degree")

    def __add__(self, other):
        self._check(other)
        comps = dict(self.comps)
        for k, v in other.comps.items():
            comps[k] = comps[k] + v if k in comps else v
        return FormField(self.n, self.degree, comps)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return FormField(self.n, self.degree, {k: -v for k, v in self.comps.items()})

    def __rmul__(self, c: Scalar):
        c = _scalar(c)
        return FormField(self.n, self.degree, {k: c * v for k, v in self.comps.items()})

    __mul__ = __rmul__

    def wedge(self, other: "FormField") -> "FormField":
        p, q = self.degree, other.degree
        if p + q > MAX_FORM_DEGREE:
            raise DegreeOverflow(f"wedge of degrees {p} and {q}")
        acc = _Acc(vector=False)
        for I, a in self.comps.items():
            for J, b in other.comps.items():
                acc.add(I + J, a * b)
        return FormField(self.n, p + q, acc.build())

    def is_zero(self) -> bool:
        return not self.comps

    def __repr__(self):
        body = ", ".join(f"{k}: {v}" for k, v in sorted(self.comps.items()))
        return f"FormField(n={self.n}, k={self.degree}, {{{body}}})"


class VectorFormField:
    """A vector-valued l-form (0 <= l <= 2); l = 0 is a vector field."""

    __slots__ = ("n", "degree", "comps")

    def __init__(self, n: int, degree: int, comps: dict = None):
        if not 0 <= degree <= MAX_VECTOR_DEGREE:
            raise DegreeOverflow(f"vector form degree {degree} outside 0..{MAX_VECTOR_DEGREE}")
        self.n = n
        self.degree = degree
        acc = _Acc(vector=True)
        for (a, idx), e in (comps or {}).items():
            idx = tuple(idx)
            if not 0 <= a < 2 * n or len(idx) != degree or any(not 0 <= b < 2 * n for b in idx):
                raise ValueError(f"bad index {(a, idx)} for a vector {degree}-form in dimension {n}")
            acc.add((a, idx), _coerce(e, n))
        self.comps = {k: v for k, v in acc.build().items() if v is not ZERO}

    @property
    def dim(self) -> int:
        return 2 * self.n

    def __getitem__(self, key) -> Expr:
        a, idx = key
        s, idx = _sort_sign(idx)
        if s == 0:
            return ZERO
        e = self.comps.get((a, idx), ZERO)
        return e if s > 0 or e is ZERO else -e

    def entry(self, a: int, j: int) -> Expr:
        """Matrix entry of a (1,1) tensor."""
        return self.comps.get((a, (j,)), ZERO)

    def component(self, a: int) -> Expr:
        """Component of a vector field."""
        return self.comps.get((a, ()), ZERO)

    def column(self, j: int) -> "VectorFormField":
        """Image A(d_j) of the j-th frame vector under a (1,1) tensor."""
        return VectorFormField(self.n, 0, {(a, ()): e for (a, (c,)), e in self.comps.items() if c == j})

    def matrix(self):
        D = self.dim
        if self.degree == 0:
            return [self.component(a) for a in range(D)]
        if self.degree == 1:
            return [[self.entry(a, j) for j in range(D)] for a in range(D)]
        raise UnsupportedKind("matrix view needs degree 0 or 1")

    def _check(self, other):
        if not isinstance(other, VectorFormField) or other.n != self.n or other.degree != self.degree:
            raise ValueError("vector forms must share dimension and degree")

    def __add__(self, other):
        self._check(other)
        comps = dict(self.comps)
        for k, v in other.comps.items():
            comps[k] = comps[k] + v if k in comps else v
        return VectorFormField(self.n, self.degree, comps)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return VectorFormField(self.n, self.degree, {k: -v for k, v in self.comps.items()})

    def __rmul__(self, c: Scalar):
        c = _scalar(c)
        return VectorFormField(self.n, self.degree, {k: c * v for k, v in self.comps.items()})

    __mul__ = __rmul__

    def is_zero(self) -> bool:
        return not self.comps

    def __repr__(self):
        body = ", ".join(f"{k}: {v}" for k, v in sorted(self.comps.items()))
        return f"VectorFormField(n={self.n}, l={self.degree}, {{{body}}})"


# Names used by callers that care about the degree.
VectorField = VectorFormField
TensorField11 = VectorFormField


def _coerce(e, n):
    return parse_expr(e, n) if isinstance(e, str) else as_expr(e)


def vector_field(n: int, comps: Sequence) -> VectorFormField:
    if len(comps) != 2 * n:
        raise ValueError(f"vector field needs {2 * n} components")
    return VectorFormField(n, 0, {(a, ()): _coerce(e, n) for a, e in enumerate(comps)})


def tensor11(n: int, rows: Sequence[Sequence]) -> VectorFormField:
    D = 2 * n
    if len(rows) != D or any(len(r) != D for r in rows):
        raise ValueError(f"(1,1) tensor needs a {D}x{D} matrix")
    return VectorFormField(n, 1, {(a, (j,)): _coerce(rows[a][j], n)
                                  for a in range(D) for j in range(D)})


def identity(n: int) -> VectorFormField:
    return VectorFormField(n, 1, {(a, (a,)): 1 for a in range(2 * n)})


def one_form(n: int, coeffs: Sequence) -> FormField:
    """1-form from its 2n coefficients on (dx^1..dx^n, dy^1..dy^n)."""
    if len(coeffs) != 2 * n:
        raise ValueError(f"1-form needs {2 * n} coefficients")
    return FormField(n, 1, {(a,): _coerce(e, n) for a, e in enumerate(coeffs)})


def semibasic_form(n: int, coeffs: Sequence) -> FormField:
    """theta_i dx^i from its n coefficients."""
    if len(coeffs) != n:
        raise ValueError(f"semi-basic 1-form needs {n} coefficients")
    return FormField(n, 1, {(i,): _coerce(e, n) for i, e in enumerate(coeffs)})


def liouville(n: int) -> VectorFormField:
    return VectorFormField(n, 0, {(n + i, ()): parse_expr(f"y{i + 1}", n) for i in range(n)})


def partial(f: Expr, a: int, n: int) -> Expr:
    return diff(f, CoordIndex.from_flat(a, n))


def directional(X: VectorFormField, f: Expr) -> Expr:
    """X(f) for a vector field X."""
    n = X.n
    return total(c * partial(f, a, n) for (a, _), c in X.comps.items())


# ---------------------------------------------------------------------------
# Algebraic operations


def compose(A: VectorFormField, K: VectorFormField) -> VectorFormField:
    """A o K for a (1,1) tensor A; K a vector field, (1,1) tensor or vector 2-form."""
    if A.degree != 1:
        raise UnsupportedKind("left factor of compose must be a (1,1) tensor")
    rows = defaultdict(list)
    for (a, (c,)), e in A.comps.items():
        rows[c].append((a, e))
    acc = _Acc(vector=True)
    for (c, I), k in K.comps.items():
        for a, e in rows.get(c, ()):
            acc.add((a, I), e * k)
    return VectorFormField(A.n, K.degree, acc.build())


apply = compose


def bar_wedge(B: VectorFormField, A: VectorFormField) -> VectorFormField:
    """Slot-wise composition  sum_i A(X_1, .., B X_i, .., X_l)."""
    if B.degree != 1:
        raise UnsupportedKind("bar_wedge needs a (1,1) tensor as first argument")
    cols = defaultdict(list)
    for (c, (d,)), e in B.comps.items():
        cols[c].append((d, e))
    acc = _Acc(vector=True)
    for (a, K), e in A.comps.items():
        for j, c in enumerate(K):
            for d, b in cols.get(c, ()):
                acc.add((a, K[:j] + (d,) + K[j + 1:]), e * b)
    return VectorFormField(A.n, A.degree, acc.build())


def inner(A: VectorFormField, omega: FormField) -> FormField:
    """i_A omega, a (k + l - 1)-form; zero when omega is a function."""
    l, k, n = A.degree, omega.degree, A.n
    if k == 0:
        return FormField(n, max(l - 1, 0))
    deg = k + l - 1
    if deg > MAX_FORM_DEGREE:
        raise DegreeOverflow(f"i_A of a {k}-form by a vector {l}-form has degree {deg}")
    by_args = defaultdict(list)
    for (c, I), e in A.comps.items():
        by_args[I].append((c, e))
    comps = {}
    for J in combinations(range(2 * n), deg):
        terms = []
        for sign, P, Q in _shuffles(J, l):
            for c, e in by_args.get(P, ()):
                w = omega[(c,) + Q]
                if w is not ZERO:
                    terms.append(e * w if sign > 0 else -(e * w))
        if terms:
            comps[J] = total(terms)
    return FormField(n, deg, comps)


def insert(X: VectorFormField, K: VectorFormField) -> VectorFormField:
    """i_X K = K(X, ...) for a vector field X and vector l-form K, l >= 1."""
    if X.degree != 0 or K.degree == 0:
        raise UnsupportedKind("insert needs a vector field and a vector form of degree >= 1")
    out = _Acc(vector=True)
    for (a, I), e in K.comps.items():
        for j, c in enumerate(I):
            x = X.component(c)
            if x is not ZERO:
                out.add((a, I[:j] + I[j + 1:]), x * e, (-1) ** j)
    return VectorFormField(K.n, K.degree - 1, out.build())


def insert_form(X: VectorFormField, omega: FormField) -> FormField:
    """i_X omega for a vector field X."""
    return inner(X, omega)


# ---------------------------------------------------------------------------
# Derivatives


def exterior_derivative(omega: FormField) -> FormField:
    if omega.degree >= MAX_FORM_DEGREE:
        raise DegreeOverflow(f"d of a {omega.degree}-form exceeds degree {MAX_FORM_DEGREE}")
    n = omega.n
    acc = _Acc(vector=False)
    for I, e in omega.comps.items():
        for d in range(2 * n):
            if d not in I:
                acc.add((d,) + I, partial(e, d, n))
    return FormField(n, omega.degree + 1, acc.build())


d = exterior_derivative


def d_A(A: VectorFormField, omega: FormField) -> FormField:
    """d_A = i_A d - (-1)^(l-1) d i_A."""
    l, k = A.degree, omega.degree
    if k + l > MAX_FORM_DEGREE:
        raise DegreeOverflow(f"d_A of a {k}-form by a vector {l}-form has degree {k + l}")
    first = inner(A, exterior_derivative(omega))
    if k == 0:
        return first
    second = exterior_derivative(inner(A, omega))
    return first + second if l % 2 == 0 else first - second


def lie_bracket(X: VectorFormField, Y: VectorFormField) -> VectorFormField:
    if X.degree != 0 or Y.degree != 0:
        raise UnsupportedKind("lie_bracket needs two vector fields")
    n = X.n
    comps = {}
    for a in range(2 * n):
        comps[(a, ())] = directional(X, Y.component(a)) - directional(Y, X.component(a))
    return VectorFormField(n, 0, comps)


def lie_derivative_form(X: VectorFormField, omega: FormField) -> FormField:
    """L_X omega by the coordinate formula (Cartan's formula is checked in tests)."""
    n = X.n
    acc = _Acc(vector=False)
    for I, e in omega.comps.items():
        acc.add(I, directional(X, e))
        for j, c in enumerate(I):
            for dd in range(2 * n):
                g = partial(X.component(c), dd, n)
                if g is not ZERO:
                    acc.add(I[:j] + (dd,) + I[j + 1:], e * g)
    return FormField(n, omega.degree, acc.build())


def lie_derivative_vector_form(X: VectorFormField, A: VectorFormField) -> VectorFormField:
    """L_X A for a vector-valued form A (the Lie bracket when A is a vector field)."""
    n = X.n
    acc = _Acc(vector=True)
    for (a, I), e in A.comps.items():
        acc.add((a, I), directional(X, e))
        for b in range(2 * n):
            g = partial(X.component(b), a, n)
            if g is not ZERO:
                acc.add((b, I), e * g, -1)
        for j, c in enumerate(I):
            for dd in range(2 * n):
                g = partial(X.component(c), dd, n)
                if g is not ZERO:
                    acc.add((a, I[:j] + (dd,) + I[j + 1:]), e * g)
    return VectorFormField(n, A.degree, acc.build())


lie_derivative_tensor = lie_derivative_vector_form


def lie_derivative(X: VectorFormField, obj):
    if isinstance(obj, (Expr, int, float)):
        return directional(X, as_expr(obj))
    if isinstance(obj, FormField):
        return lie_derivative_form(X, obj)
    if isinstance(obj, VectorFormField):
        return lie_derivative_vector_form(X, obj)
    raise UnsupportedKind(f"no Lie derivative for {type(obj).__name__}")


def _derivative_of_column(A: VectorFormField, i: int, j: int) -> VectorFormField:
    """d_i applied componentwise to the column A(d_j)."""
    n = A.n
    return VectorFormField(n, 0, {(a, ()): partial(e, i, n)
                                  for (a, (c,)), e in A.comps.items() if c == j})


def fn_bracket_11(A: VectorFormField, B: VectorFormField) -> VectorFormField:
    """Frolicher-Nijenhuis bracket of two (1,1) tensors, a vector 2-form.

    On coordinate fields [d_i, d_j] = 0 and [d_i, B d_j] = d_i(B_j), so
    [A,B](d_i, d_j) = [A_i,B_j] + [B_i,A_j] - A(d_i B_j) - B(d_i A_j)
                      + A(d_j B_i) + B(d_j A_i).
    """
    if A.degree != 1 or B.degree != 1:
        raise UnsupportedKind("fn_bracket_11 needs two (1,1) tensors")
    n = A.n
    Acol = [A.column(j) for j in range(2 * n)]
    Bcol = [B.column(j) for j in range(2 * n)]
    acc = _Acc(vector=True)
    for i, j in combinations(range(2 * n), 2):
        parts = [
            lie_bracket(Acol[i], Bcol[j]),
            lie_bracket(Bcol[i], Acol[j]),
            -compose(A, _derivative_of_column(B, i, j)),
            -compose(B, _derivative_of_column(A, i, j)),
            compose(A, _derivative_of_column(B, j, i)),
            compose(B, _derivative_of_column(A, j, i)),
        ]
        for p in parts:
            for (a, _), e in p.comps.items():
                acc.add((a, (i, j)), e)
    return VectorFormField(n, 2, acc.build())


def nijenhuis(A: VectorFormField) -> VectorFormField:
    """N_A = 1/2 [A, A]:  N_A(d_i, d_j) = [A_i, A_j] - A(d_i A_j) + A(d_j A_i)."""
    if A.degree != 1:
        raise UnsupportedKind("nijenhuis needs a (1,1) tensor")
    n = A.n
    cols = [A.column(j) for j in range(2 * n)]
    acc = _Acc(vector=True)
    for i, j in combinations(range(2 * n), 2):
        parts = [
            lie_bracket(cols[i], cols[j]),
            -compose(A, _derivative_of_column(A, i, j)),
            compose(A, _derivative_of_column(A, j, i)),
        ]
        for p in parts:
            for (a, _), e in p.comps.items():
                acc.add((a, (i, j)), e)
    return VectorFormField(n, 2, acc.build())


def fn_bracket(A: VectorFormField, B: VectorFormField) -> VectorFormField:
    """Bracket for the degree pairs used here: (0,0), (0,l), (1,0), (1,1)."""
    if A.degree == 0:
        return lie_derivative_vector_form(A, B)
    if B.degree == 0:
        # graded antisymmetry [A,X] = -(-1)^(l*0) [X,A]
        return -lie_derivative_vector_form(B, A)
    if A.degree == 1 and B.degree == 1:
        return fn_bracket_11(A, B)
    raise UnsupportedKind(f"bracket of degrees {A.degree} and {B.degree} not implemented")


# ---------------------------------------------------------------------------
# Dynamical covariant derivative


def nabla(S, obj):
    """Dynamical covariant derivative of a semispray ``S``.

    ``S`` must expose ``field`` (the vector field), ``h``, ``v`` and ``psi``.
    """
    X = S.field
    if isinstance(obj, (Expr, int, float)):
        return directional(X, as_expr(obj))
    if isinstance(obj, FormField):
        if obj.degree == 0:
            return FormField.scalar(directional(X, obj[()]), obj.n)
        if obj.degree > 2:
            raise UnsupportedKind("nabla is supported on forms of degree <= 2")
        return lie_derivative_form(X, obj) - inner(S.psi, obj)
    if isinstance(obj, VectorFormField):
        if obj.degree == 0:
            hX, vX = compose(S.h, obj), compose(S.v, obj)
            return compose(S.h, lie_bracket(X, hX)) + compose(S.v, lie_bracket(X, vX))
        return (lie_derivative_vector_form(X, obj) + compose(S.psi, obj)
                - bar_wedge(S.psi, obj))
    raise UnsupportedKind(f"nabla is not defined on {type(obj).__name__}")


# ---------------------------------------------------------------------------
# Commutation formulae (self-test)


def commutation_check(A: VectorFormField, B: VectorFormField, X: VectorFormField,
                      omega: FormField, samples: SampleSet) -> dict:
    """Max residuals of the three commutation formulae on ``omega``.

    iadb:  i_A d_B - d_B i_A - (d_{B o A} - i_{[A,B]})
    lxia:  L_X i_A - i_A L_X - i_{[X,A]}
    ixda:  i_X d_A + d_A i_X - (L_{AX} - i_{[X,A]})
    Formulas whose degree exceeds the caps are reported as None.
    """
    out = {}
    try:
        lhs = inner(A, d_A(B, omega)) - d_A(B, inner(A, omega))
        rhs = d_A(compose(B, A), omega) - inner(fn_bracket_11(A, B), omega)
        out["iadb"] = max_abs(lhs - rhs, samples)[0]
    except DegreeOverflow:
        out["iadb"] = None
    XA = lie_derivative_vector_form(X, A)
    lhs = lie_derivative_form(X, inner(A, omega)) - inner(A, lie_derivative_form(X, omega))
    out["lxia"] = max_abs(lhs - inner(XA, omega), samples)[0]
    try:
        first = inner(X, d_A(A, omega))
        second = d_A(A, inner(X, omega)) if omega.degree > 0 else FormField(omega.n, omega.degree)
        lhs = first + second
        rhs = lie_derivative_form(compose(A, X), omega) - inner(XA, omega)
        out["ixda"] = max_abs(lhs - rhs, samples)[0]
    except DegreeOverflow:
        out["ixda"] = None
    return out


# ---------------------------------------------------------------------------
# Numerics


def _exprs(obj) -> list:
    if isinstance(obj, Expr):
        return [obj]
    if isinstance(obj, (FormField, VectorFormField)):
        return list(obj.comps.values())
    if isinstance(obj, (list, tuple)):
        out = []
        for o in obj:
            out.extend(_exprs(o))
        return out
    raise UnsupportedKind(f"cannot evaluate {type(obj).__name__}")


def max_abs(obj, samples: SampleSet) -> Tuple[float, int]:
    """Largest absolute component value over all samples, and its sample index."""
    exprs = _exprs(obj)
    if not exprs:
        return 0.0, 0
    vals = np.abs(evaluate_many(exprs, samples))
    per_point = vals.max(axis=0)
    i = int(np.argmax(per_point))
    return float(per_point[i]), i


def component_values(obj, samples: SampleSet) -> dict:
    """Map component key -> array of values at the samples."""
    if isinstance(obj, Expr):
        return {(): evaluate_many([obj], samples)[0]}
    keys = list(obj.comps)
    vals = evaluate_many([obj.comps[k] for k in keys], samples)
    return dict(zip(keys, vals))


def evaluate_on(omega: FormField, vectors: Sequence[VectorFormField], samples: SampleSet) -> np.ndarray:
    """omega(X_1, .., X_k) at each sample, by the determinant convention."""
    k = omega.degree
    if len(vectors) != k:
        raise ValueError(f"a {k}-form takes {k} arguments")
    if k == 0:
        return evaluate_many([omega[()]], samples)[0]
    D = omega.dim
    m = samples.m
    V = np.zeros((k, D, m))
    for r, X in enumerate(vectors):
        for (a, _), v in component_values(X, samples).items():
            V[r, a] = v
    out = np.zeros(m)
    for I, vals in component_values(omega, samples).items():
        sub = V[:, list(I), :].transpose(2, 0, 1)
        out += vals * np.linalg.det(sub)
    return out


def matrix_values(A: VectorFormField, samples: SampleSet) -> np.ndarray:
    """Numeric (m, 2n, 2n) array of a (1,1) tensor."""
    D = A.dim
    out = np.zeros((samples.m, D, D))
    for (a, (j,)), v in component_values(A, samples).items():
        out[:, a, j] = v
    return out


def vector_values(X: VectorFormField, samples: SampleSet) -> np.ndarray:
    """Numeric (m, 2n) array of a vector field."""
    out = np.zeros((samples.m, X.dim))
    for (a, _), v in component_values(X, samples).items():
        out[:, a] = v
    return out


__all__ = [
    "DegreeOverflow", "FormField", "MAX_FORM_DEGREE", "MAX_VECTOR_DEGREE", "TensorField11",
    "UnsupportedKind", "VectorField", "VectorFormField", "apply", "bar_wedge",
    "commutation_check", "component_values", "compose", "d", "d_A", "directional",
    "evaluate_on", "exterior_derivative", "fn_bracket", "fn_bracket_11", "identity", "inner",
    "insert", "insert_form", "lie_bracket", "lie_derivative", "lie_derivative_form",
    "lie_derivative_tensor", "lie_derivative_vector_form", "liouville", "matrix_values",
    "max_abs", "nabla", "pointwise_max", "nijenhuis", "one_form", "partial", "semibasic_form", "tensor11",
    "vector_field", "vector_values",
]


def pointwise_max(obj, samples: SampleSet) -> np.ndarray:
    """Per-sample max over all components of |obj|, shape (m,)."""
    exprs = _exprs(obj)
    if not exprs:
        return np.zeros(samples.m)
    return np.abs(evaluate_many(exprs, samples)).max(axis=0)
