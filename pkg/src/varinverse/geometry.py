"""Structures induced by a semispray: connection, projectors, curvature, geodesics.

Every tensor is built intrinsically from Lie derivatives along the spray
field and can be cross-checked against the classical coordinate formulas
built from the nonlinear coefficients N^i_j = dG^i/dy^j.  Passing a sample
set to the module-level constructors runs those cross-checks and raises
``CrossCheckError`` on disagreement.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence, Tuple

import numpy as np

from . import fn_calculus as fn
from .fn_calculus import VectorFormField
from .sampling import DEFAULT_Y_MIN, PhasePoint, SampleSet
from .symbolic import (
    ZERO,
    DomainError,
    Expr,
    InsufficientSamples,
    Program,
    as_expr,
    diff,
    homogeneity_degree,
    parse_expr,
    total,
    xi,
    yi,
)


class CrossCheckError(AssertionError):
    """An intrinsic construction disagrees with its coordinate formula."""

    def __init__(self, what: str, residual: float, tol: float):
        super().__init__(f"{what}: residual {residual:.3e} exceeds {tol:.1e}")
        self.what = what
        self.residual = residual
        self.tol = tol


class LeftDomain(RuntimeError):
    """Integration left the admissible domain at the given step."""

    def __init__(self, step: int, reason: str):
        super().__init__(f"left the domain at step {step}: {reason}")
        self.step = step
        self.reason = reason


@dataclass(frozen=True, eq=False)
class Semispray:
    """Semispray S = y^i d/dx^i - 2 G^i d/dy^i given by its coefficients G^i."""

    n: int
    G: Tuple[Expr, ...]
    name: str = "semispray"

    def __post_init__(self):
        G = tuple(parse_expr(g, self.n) if isinstance(g, str) else as_expr(g) for g in self.G)
        if len(G) != self.n:
            raise ValueError(f"expected {self.n} coefficients, got {len(G)}")
        for g in G:
            if g.max_index > self.n:
                raise ValueError(f"coefficient {g} uses an index above {self.n}")
        object.__setattr__(self, "G", G)

    @classmethod
    def from_strings(cls, G: Sequence[str], name: str = "semispray") -> "Semispray":
        return cls(len(G), tuple(G), name)

    @cached_property
    def field(self) -> VectorFormField:
        n = self.n
        comps = [parse_expr(f"y{i + 1}", n) for i in range(n)] + [-2 * g for g in self.G]
        return fn.vector_field(n, comps)

    @cached_property
    def N(self) -> Tuple[Tuple[Expr, ...], ...]:
        return tuple(tuple(diff(self.G[i], yi(j + 1)) for j in range(self.n)) for i in range(self.n))

    @cached_property
    def J(self) -> VectorFormField:
        return tangent_structure(self.n)

    @cached_property
    def liouville(self) -> VectorFormField:
        return fn.liouville(self.n)

    @cached_property
    def lie_S_J(self) -> VectorFormField:
        return fn.lie_derivative_tensor(self.field, self.J)

    @cached_property
    def h(self) -> VectorFormField:
        return 0.5 * (fn.identity(self.n) - self.lie_S_J)

    @cached_property
    def v(self) -> VectorFormField:
        return fn.identity(self.n) - self.h

    @cached_property
    def gamma(self) -> VectorFormField:
        return -self.lie_S_J

    @cached_property
    def lie_S_h(self) -> VectorFormField:
        return fn.lie_derivative_tensor(self.field, self.h)

    @cached_property
    def F(self) -> VectorFormField:
        return fn.compose(self.h, self.lie_S_h) - self.J

    @cached_property
    def phi(self) -> VectorFormField:
        return fn.compose(self.v, self.lie_S_h)

    @cached_property
    def psi(self) -> VectorFormField:
        return self.F + self.J - self.phi

    @cached_property
    def R(self) -> VectorFormField:
        return fn.nijenhuis(self.h)

    def delta(self, f: Expr, i: int) -> Expr:
        """delta f / delta x^i = df/dx^i - N^j_i df/dy^j  (i is 0-based)."""
        n = self.n
        return diff(f, xi(i + 1)) - total(self.N[j][i] * diff(f, yi(j + 1)) for j in range(n))

    @cached_property
    def jacobi_coords(self) -> Tuple[Tuple[Expr, ...], ...]:
        """R^i_j = 2 dG^i/dx^j - S(N^i_j) - N^i_r N^r_j."""
        n, S, N = self.n, self.field, self.N
        return tuple(tuple(
            2 * diff(self.G[i], xi(j + 1)) - fn.directional(S, N[i][j])
            - total(N[i][r] * N[r][j] for r in range(n))
            for j in range(n)) for i in range(n))

    @cached_property
    def curvature_coords(self) -> dict:
        """R^k_ij = delta_j N^k_i - delta_i N^k_j for i < j, keyed (k, i, j), 0-based."""
        n, N = self.n, self.N
        out = {}
        for k in range(n):
            for i in range(n):
                for j in range(i + 1, n):
                    out[(k, i, j)] = self.delta(N[k][i], j) - self.delta(N[k][j], i)
        return out

    def h_block(self) -> VectorFormField:
        """h from the block formula [[I, 0], [-N, 0]]."""
        n = self.n
        comps = {(i, (i,)): 1 for i in range(n)}
        for i in range(n):
            for j in range(n):
                comps[(n + i, (j,))] = -self.N[i][j]
        return VectorFormField(n, 1, comps)

    def phi_block(self) -> VectorFormField:
        n = self.n
        return VectorFormField(n, 1, {(n + i, (j,)): self.jacobi_coords[i][j]
                                      for i in range(n) for j in range(n)})

    def curvature_block(self) -> VectorFormField:
        n = self.n
        return VectorFormField(n, 2, {(n + k, (i, j)): e for (k, i, j), e in self.curvature_coords.items()})

    def cross_check(self, samples: SampleSet, tol: float = 1e-9) -> dict:
        """Run every intrinsic-vs-coordinate check; raise on the first failure."""
        out = {
            "h": _check("h vs block formula", self.h - self.h_block(), samples, 1e-10),
            "phi": _check("Jacobi endomorphism vs coordinates", self.phi - self.phi_block(), samples, tol),
            "R": _check("curvature vs coordinates", self.R - self.curvature_block(), samples, tol),
        }
        return out

    def __repr__(self):
        return f"Semispray({self.name!r}, n={self.n}, G={[str(g) for g in self.G]})"


def _check(what: str, diffobj, samples: SampleSet, tol: float) -> float:
    res, _ = fn.max_abs(diffobj, samples)
    if res > tol:
        raise CrossCheckError(what, res, tol)
    return res


def flat_spray(n: int) -> Semispray:
    return Semispray(n, tuple([ZERO] * n), name=f"flat{n}d")


# ---------------------------------------------------------------------------
# Constructors with optional cross-checks


def spray_field(S: Semispray) -> VectorFormField:
    return S.field


def nonlinear_coefficients(S: Semispray):
    return S.N


def tangent_structure(n: int) -> VectorFormField:
    """J = d/dy^i (x) dx^i, blocks [[0, 0], [I, 0]]."""
    return VectorFormField(n, 1, {(n + i, (i,)): 1 for i in range(n)})


def horizontal_proj(S: Semispray, samples: Optional[SampleSet] = None) -> VectorFormField:
    if samples is not None:
        _check("h vs block formula", S.h - S.h_block(), samples, 1e-10)
    return S.h


def vertical_proj(S: Semispray, samples: Optional[SampleSet] = None) -> VectorFormField:
    horizontal_proj(S, samples)
    return S.v


def almost_product(S: Semispray) -> VectorFormField:
    return S.gamma


def almost_complex(S: Semispray) -> VectorFormField:
    return S.F


def jacobi_endomorphism(S: Semispray, samples: Optional[SampleSet] = None,
                        tol: float = 1e-9) -> VectorFormField:
    if samples is not None:
        _check("Jacobi endomorphism vs coordinates", S.phi - S.phi_block(), samples, tol)
    return S.phi


def curvature(S: Semispray, samples: Optional[SampleSet] = None, tol: float = 1e-9) -> VectorFormField:
    if samples is not None:
        _check("curvature vs coordinates", S.R - S.curvature_block(), samples, tol)
    return S.R


def is_spray(S: Semispray, samples: SampleSet, tol: float = 1e-9) -> bool:
    """2-homogeneity of S, decided by the degree test and by [C, S] = S.

    The two decisions must agree; a disagreement raises ``CrossCheckError``.
    """
    if samples.m < 8:
        raise InsufficientSamples("is_spray needs at least 8 points")
    by_degree = True
    for g in S.G:
        if g is ZERO:
            continue
        try:
            k = homogeneity_degree(g, samples)
        except InsufficientSamples:
            # numerically zero on the samples; treat as the zero coefficient
            if fn.max_abs(g, samples)[0] <= 1e-12:
                continue
            by_degree = False
            break
        if k != 2:
            by_degree = False
            break
    res, _ = fn.max_abs(fn.lie_bracket(S.liouville, S.field) - S.field, samples)
    scale = fn.max_abs(S.field, samples)[0]
    by_bracket = res <= tol * (1 + scale)
    if by_degree != by_bracket:
        raise CrossCheckError("spray degree test vs [C,S]=S", res, tol)
    return by_degree


# ---------------------------------------------------------------------------
# Geodesics


@dataclass(frozen=True)
class Trajectory:
    t: np.ndarray
    x: np.ndarray
    y: np.ndarray

    def __len__(self):
        return len(self.t)

    @property
    def points(self):
        return [PhasePoint(self.x[i], self.y[i], y_min=0.0) for i in range(len(self.t))]

    def samples(self) -> SampleSet:
        return SampleSet(self.x, self.y, y_min=0.0)


def integrate_geodesic(S: Semispray, p0: PhasePoint, dt: float, steps: int,
                       y_min: float = DEFAULT_Y_MIN) -> Trajectory:
    """Classical RK4 for x' = y, y' = -2 G(x, y)."""
    if dt <= 0 or steps < 1:
        raise ValueError("need dt > 0 and steps >= 1")
    n = S.n
    program = Program(S.G)

    def accel(x, y, step):
        try:
            return -2.0 * program(SampleSet(x[None, :], y[None, :], y_min=0.0))[:, 0]
        except DomainError as exc:
            raise LeftDomain(step, str(exc)) from exc

    X = np.empty((steps + 1, n))
    Y = np.empty((steps + 1, n))
    X[0], Y[0] = p0.x, p0.y
    for k in range(steps):
        x, y = X[k], Y[k]
        k1x, k1y = y, accel(x, y, k)
        k2x, k2y = y + 0.5 * dt * k1y, accel(x + 0.5 * dt * k1x, y + 0.5 * dt * k1y, k)
        k3x, k3y = y + 0.5 * dt * k2y, accel(x + 0.5 * dt * k2x, y + 0.5 * dt * k2y, k)
        k4x, k4y = y + dt * k3y, accel(x + dt * k3x, y + dt * k3y, k)
        X[k + 1] = x + dt / 6 * (k1x + 2 * k2x + 2 * k3x + k4x)
        Y[k + 1] = y + dt / 6 * (k1y + 2 * k2y + 2 * k3y + k4y)
        if not np.all(np.isfinite(X[k + 1])) or not np.all(np.isfinite(Y[k + 1])):
            raise LeftDomain(k + 1, "non-finite state")
        if np.linalg.norm(Y[k + 1]) < y_min:
            raise LeftDomain(k + 1, f"|y| fell below {y_min}")
    t = dt * np.arange(steps + 1)
    return Trajectory(t, X, Y)
