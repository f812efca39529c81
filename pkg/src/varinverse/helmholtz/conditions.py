"""Helmholtz conditions for a semi-basic 1-form, intrinsic and multiplier forms.

A semi-basic 1-form theta makes L_S theta closed exactly when

    d_h theta = 0,  d_J theta = 0,  nabla d theta = 0,  d_Phi theta = 0.

``helmholtz_residuals`` evaluates the four 2-forms and the closedness of
L_S theta side by side and flags any disagreement between the two.  The
multiplier route works with a_ij, g_ij and nabla g_ij instead; its
residuals are scaled to equal the magnitudes of the matching 2-form
components so both routes share one tolerance rule.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

import numpy as np

from .. import fn_calculus as fn
from ..fn_calculus import FormField
from ..geometry import Semispray, is_spray
from ..sampling import SampleSet
from ..symbolic import Expr, InsufficientSamples, diff, homogeneity_degree, simplify, total, xi, yi
from .errors import NotHomogeneous, NotSemiBasic, NotSpray, PostconditionFailed, PreconditionFailed, ZeroDegree
from .report import CheckReport, ConditionName as C, make_residual

MIN_CHECK_SAMPLES = 20
FOUR = (C.DhTheta, C.DJTheta, C.NablaDTheta, C.DPhiTheta)


def _require_samples(samples: SampleSet, need: int = MIN_CHECK_SAMPLES):
    if samples.m < need:
        raise InsufficientSamples(f"checks need at least {need} sample points, got {samples.m}")


def _scale(obj, samples) -> float:
    return float(fn.pointwise_max(obj, samples).max()) if samples.m else 0.0


def semibasic_residual(theta: FormField, J, samples: SampleSet) -> Tuple[np.ndarray, float]:
    return fn.pointwise_max(fn.inner(J, theta), samples), _scale(theta, samples)


def check_semibasic(S: Semispray, theta: FormField, samples: SampleSet, tol: float):
    vals, scale = semibasic_residual(theta, S.J, samples)
    res = make_residual(C.SemiBasic, vals, samples, scale, tol)
    if not res.passed:
        raise NotSemiBasic(res.max_abs)
    return res


def form_degree(theta: FormField, samples: SampleSet) -> Optional[Fraction]:
    """Common homogeneity degree of the non-zero components, or None."""
    degree = None
    seen = False
    for e in theta.comps.values():
        try:
            k = homogeneity_degree(e, samples)
        except InsufficientSamples:
            if fn.max_abs(e, samples)[0] <= 1e-12:
                continue
            return None
        if k is None or (degree is not None and k != degree):
            return None
        degree = k
        seen = True
    return degree if seen else None


def helmholtz_residuals(S: Semispray, theta: FormField, samples: SampleSet, tol: float = 1e-9,
                        closed_tol: Optional[float] = None, form_id: str = "theta",
                        cross_check: bool = True) -> CheckReport:
    """The four Helmholtz 2-forms and d(L_S theta) at the samples."""
    _require_samples(samples)
    closed_tol = 10 * tol if closed_tol is None else closed_tol
    semi = check_semibasic(S, theta, samples, tol)
    if cross_check:
        S.cross_check(samples)
    dtheta = fn.exterior_derivative(theta)
    scale = _scale(dtheta, samples)
    forms = {
        C.DhTheta: fn.d_A(S.h, theta),
        C.DJTheta: fn.d_A(S.J, theta),
        C.NablaDTheta: fn.nabla(S, dtheta),
        C.DPhiTheta: fn.d_A(S.phi, theta),
    }
    closed = fn.exterior_derivative(fn.lie_derivative_form(S.field, theta))
    report = CheckReport(S.name, form_id, samples.seed, samples.m, tol, "full")
    report.conditions.append(semi)
    for name, form in forms.items():
        report.conditions.append(make_residual(name, fn.pointwise_max(form, samples), samples, scale, tol))
    closed_res = make_residual(C.ClosedLSTheta, fn.pointwise_max(closed, samples), samples, scale,
                               closed_tol, required=False)
    report.conditions.append(closed_res)
    four_pass = all(report.condition(n).passed for n in FOUR)
    if four_pass != closed_res.passed:
        report.consistent = False
        report.notes.append("internal consistency failure: four-condition verdict "
                            f"({four_pass}) differs from closedness of L_S theta ({closed_res.passed})")
    return report


@dataclass
class MultiplierData:
    """Coordinate data of a semi-basic form: a_ij, g_ij, nabla g_ij, g R commutator."""

    a: tuple
    g: tuple
    nabla_g: tuple
    gR: tuple


def multiplier_data(S: Semispray, theta: FormField) -> MultiplierData:
    n = S.n
    th = [theta[(i,)] for i in range(n)]
    N = S.N
    a = tuple(tuple(0.5 * (S.delta(th[i], j) - S.delta(th[j], i)) for j in range(n)) for i in range(n))
    g = tuple(tuple(0.5 * diff(th[i], yi(j + 1)) for j in range(n)) for i in range(n))
    ng = tuple(tuple(
        fn.directional(S.field, g[i][j])
        - total(N[k][i] * g[k][j] for k in range(n))
        - total(N[k][j] * g[i][k] for k in range(n))
        for j in range(n)) for i in range(n))
    R = S.jacobi_coords
    gR = tuple(tuple(
        total(g[i][k] * R[k][j] for k in range(n)) - total(g[j][k] * R[k][i] for k in range(n))
        for j in range(n)) for i in range(n))
    return MultiplierData(a, g, ng, gR)


def _flat(matrix) -> list:
    return [e for row in matrix for e in row]


def multiplier_residuals(S: Semispray, theta: FormField, samples: SampleSet, tol: float = 1e-9,
                         form_id: str = "theta", intrinsic: Optional[CheckReport] = None
                         ) -> Tuple[CheckReport, MultiplierData]:
    """Coordinate Helmholtz conditions a = 0, g = g^T, nabla g = 0, gR = (gR)^T.

    Residuals are reported as 2 max|a|, 2 max|g - g^T|, 2 max|nabla g| and
    2 max|gR - (gR)^T|, which are the component magnitudes of d_h theta,
    d_J theta, the (x, y) block of nabla d theta and d_Phi theta.
    """
    _require_samples(samples)
    semi = check_semibasic(S, theta, samples, tol)
    n = S.n
    data = multiplier_data(S, theta)
    scale = _scale(fn.exterior_derivative(theta), samples)
    g = data.g
    asym = [g[i][j] - g[j][i] for i in range(n) for j in range(n)]
    dg = [diff(g[i][j], yi(k + 1)) - diff(g[i][k], yi(j + 1))
          for i in range(n) for j in range(n) for k in range(n)]

    def twice(exprs):
        return 2.0 * fn.pointwise_max(exprs, samples)

    report = CheckReport(S.name, form_id, samples.seed, samples.m, tol, "multiplier")
    report.conditions += [
        semi,
        make_residual(C.DhTheta, twice(_flat(data.a)), samples, scale, tol),
        make_residual(C.DJTheta, twice(asym), samples, scale, tol),
        make_residual(C.NablaDTheta, twice(_flat(data.nabla_g)), samples, scale, tol),
        make_residual(C.DPhiTheta, twice(_flat(data.gR)), samples, scale, tol),
        make_residual(C.SymmetricDg, fn.pointwise_max(dg, samples), samples, scale, tol, required=False),
    ]
    if intrinsic is None:
        intrinsic = helmholtz_residuals(S, theta, samples, tol, form_id=form_id)
    if intrinsic.passed != report.passed:
        report.consistent = False
        report.notes.append("intrinsic and multiplier verdicts disagree")
    return report, data


def _require_spray(S: Semispray, samples: SampleSet):
    if not is_spray(S, samples):
        raise NotSpray()


def potential(S: Semispray, theta: FormField, k, samples: SampleSet, tol: float = 1e-9,
              post_tol: float = 1e-8) -> Expr:
    """L = (1/k) i_S theta, the k-homogeneous potential with d_J L = theta."""
    k = Fraction(k)
    if k == 0:
        raise ZeroDegree()
    _require_spray(S, samples)
    check_semibasic(S, theta, samples, tol)
    scale = _scale(theta, samples)
    djt = fn.max_abs(fn.d_A(S.J, theta), samples)[0]
    if djt > tol * (1 + scale):
        raise PreconditionFailed("theta is not d_J-closed", djt)
    homog = fn.lie_derivative_form(S.liouville, theta) - float(k - 1) * theta
    hres = fn.max_abs(homog, samples)[0]
    if hres > tol * (1 + scale):
        raise PreconditionFailed(f"theta is not {k - 1}-homogeneous", hres)
    L = simplify((1.0 / float(k)) * fn.inner(S.field, theta)[()])
    back = fn.d_A(S.J, FormField.scalar(L, S.n)) - theta
    r1 = fn.max_abs(back, samples)[0]
    if r1 > post_tol * (1 + scale):
        raise PostconditionFailed("d_J L = theta", r1)
    r2, _ = fn.max_abs(fn.directional(S.liouville, L) - float(k) * L, samples)
    if r2 > post_tol * (1 + fn.max_abs(L, samples)[0]):
        raise PostconditionFailed(f"L is {k}-homogeneous", r2)
    return L


def euler_lagrange_coords(S: Semispray, L: Expr) -> list:
    """S(dL/dy^i) - dL/dx^i."""
    n = S.n
    return [fn.directional(S.field, diff(L, yi(i + 1))) - diff(L, xi(i + 1)) for i in range(n)]


def check_lagrangian(S: Semispray, L: Expr, samples: SampleSet, tol: float = 1e-9,
                     form_id: str = "L") -> CheckReport:
    """Residual of L_S d_J L - dL, cross-checked against the Euler-Lagrange equations."""
    n = S.n
    Lf = FormField.scalar(L, n)
    dL = fn.exterior_derivative(Lf)
    theta = fn.d_A(S.J, Lf)
    form_res = fn.lie_derivative_form(S.field, theta) - dL
    el = euler_lagrange_coords(S, L)
    scale = _scale(dL, samples)
    report = CheckReport(S.name, form_id, samples.seed, samples.m, tol, "lagrangian")
    report.conditions.append(make_residual(C.EulerLagrange, fn.pointwise_max(form_res, samples),
                                           samples, scale, tol))
    # dx-part must equal the coordinate residual, dy-part must vanish
    gap = [form_res[(i,)] - el[i] for i in range(n)] + [form_res[(n + i,)] for i in range(n)]
    g, _ = fn.max_abs(gap, samples)
    report.extra["euler_lagrange_coords"] = fn.max_abs(el, samples)[0]
    if g > 1e-10 * (1 + scale):
        report.consistent = False
        report.notes.append(f"form and coordinate Euler-Lagrange residuals differ by {g:.3e}")
    return report


def homogeneous_check(S: Semispray, theta: FormField, samples: SampleSet, tol: float = 1e-9,
                      form_id: str = "theta", k=None) -> CheckReport:
    """Reduced Helmholtz check for a (k-1)-homogeneous form on a spray.

    k = 1 needs {d_h, d_J}; k outside {-1, 0, 1} needs {d_h, d_J, nabla d};
    k = -1 falls back to all four.  The omitted conditions and
    k L_S theta = d i_S theta are still computed; if the reduced set passes
    but one of them fails (beyond 10x tolerance) the report is marked
    inconsistent.
    """
    _require_spray(S, samples)
    if k is None:
        deg = form_degree(theta, samples)
        if deg is None:
            raise NotHomogeneous("components of theta have no common degree")
        k = deg + 1
    k = Fraction(k)
    if k == 0:
        raise ZeroDegree()
    report = helmholtz_residuals(S, theta, samples, tol, form_id=form_id)
    report.homogeneity_degree = k - 1
    if k == 1:
        required = {C.SemiBasic, C.DhTheta, C.DJTheta}
        report.mode = "k=1 reduced"
    elif k == -1:
        required = {C.SemiBasic, *FOUR}
        report.mode = "k=-1 full"
        report.notes.append("k = -1 is excluded from the reduced branch; all four conditions required")
    else:
        required = {C.SemiBasic, C.DhTheta, C.DJTheta, C.NablaDTheta}
        report.mode = f"k={k} reduced"
    exact = float(k) * fn.lie_derivative_form(S.field, theta) - fn.exterior_derivative(fn.inner(S.field, theta))
    scale = report.condition(C.DhTheta).scale
    report.conditions.append(make_residual(C.ExactLSTheta, fn.pointwise_max(exact, samples),
                                           samples, scale, 10 * tol, required=False))
    report.set_required(required)
    if report.passed:
        for c in report.conditions:
            if c.name in required or c.name is C.SemiBasic:
                continue
            if c.max_abs > 10 * tol * (1 + c.scale):
                report.consistent = False
                report.notes.append(f"theorem violation: reduced set passes but {c.name.value} "
                                    f"residual is {c.max_abs:.3e}")
    return report
