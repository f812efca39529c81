"""Projective and Finsler metrizability certificates, and Hamel's flat-space test."""

from __future__ import annotations

import numpy as np

from .. import fn_calculus as fn
from ..fn_calculus import FormField
from ..geometry import Semispray
from ..sampling import SampleSet
from ..symbolic import Expr, InsufficientSamples, diff, evaluate_many, homogeneity_degree, simplify, xi, yi
from .conditions import (
    _require_spray,
    _scale,
    check_lagrangian,
    form_degree,
    helmholtz_residuals,
)
from .errors import NotFlat, NotHomogeneous
from .report import CheckReport, ConditionName as C, make_residual


def _expect_degree(theta: FormField, samples: SampleSet, k: int):
    deg = form_degree(theta, samples)
    if deg is None or deg != k:
        raise NotHomogeneous(f"form must be {k}-homogeneous, detected {deg}")


def _merge_el(report: CheckReport, S: Semispray, L: Expr, samples: SampleSet, tol: float):
    el = check_lagrangian(S, L, samples, tol)
    report.conditions += el.conditions
    if not el.consistent:
        report.consistent = False
        report.notes += el.notes


def projective_metrizability_check(S: Semispray, theta: FormField, samples: SampleSet,
                                   tol: float = 1e-9, form_id: str = "theta") -> CheckReport:
    """d_h theta = d_J theta = 0 for a 0-homogeneous theta; recovers F = i_S theta."""
    _require_spray(S, samples)
    _expect_degree(theta, samples, 0)
    report = helmholtz_residuals(S, theta, samples, tol, form_id=form_id)
    report.mode = "projective"
    report.homogeneity_degree = 0
    report.set_required({C.SemiBasic, C.DhTheta, C.DJTheta})
    if not report.passed:
        return report
    n = S.n
    F = simplify(fn.inner(S.field, theta)[()])
    report.potential = F
    _merge_el(report, S, F, samples, tol)
    djf = fn.d_A(S.J, FormField.scalar(F, n))
    rap = fn.inner(S.field, fn.exterior_derivative(djf))
    report.conditions.append(make_residual(C.Rapcsak, fn.pointwise_max(rap, samples), samples,
                                           _scale(fn.exterior_derivative(djf), samples), tol))
    return report


def g_rank(L: Expr, n: int, samples: SampleSet, rel_tol: float = 1e-8) -> int:
    """Minimum over samples of the rank of g_ij = 1/2 d^2 L / dy^i dy^j."""
    exprs = [0.5 * diff(diff(L, yi(i + 1)), yi(j + 1)) for i in range(n) for j in range(n)]
    vals = evaluate_many(exprs, samples).T.reshape(samples.m, n, n)
    ranks = []
    for G in vals:
        s = np.linalg.svd(G, compute_uv=False)
        ranks.append(int((s > rel_tol * max(s.max(), 1e-300)).sum()) if s.max() > 0 else 0)
    return min(ranks)


def finsler_metrizability_check(S: Semispray, theta: FormField, samples: SampleSet,
                                tol: float = 1e-9, form_id: str = "theta") -> CheckReport:
    """d_h, d_J, nabla d conditions for a 1-homogeneous theta; recovers L = 1/2 i_S theta.

    The rank of g is reported in ``extra['g_rank']`` and does not affect
    the verdict: degenerate Lagrangians are allowed.
    """
    _require_spray(S, samples)
    _expect_degree(theta, samples, 1)
    report = helmholtz_residuals(S, theta, samples, tol, form_id=form_id)
    report.mode = "finsler"
    report.homogeneity_degree = 1
    report.set_required({C.SemiBasic, C.DhTheta, C.DJTheta, C.NablaDTheta})
    if not report.passed:
        return report
    n = S.n
    L = simplify(0.5 * fn.inner(S.field, theta)[()])
    report.potential = L
    dhl = fn.d_A(S.h, FormField.scalar(L, n))
    report.conditions.append(make_residual(C.DhL, fn.pointwise_max(dhl, samples), samples,
                                           _scale(fn.exterior_derivative(FormField.scalar(L, n)), samples), tol))
    _merge_el(report, S, L, samples, tol)
    rank = g_rank(L, n, samples)
    report.extra["g_rank"] = rank
    report.extra["regular"] = rank == n
    return report


def hamel_check(S: Semispray, f: Expr, samples: SampleSet, tol: float = 1e-9,
                form_id: str = "f") -> CheckReport:
    """Symmetry of d^2 f / dy^i dx^j for 0-homogeneous f on a flat spray.

    On success F = S(f) is recorded and the projective check runs on
    theta = d_h f; a vanishing theta is reported as degenerate.
    """
    n = S.n
    curv, _ = fn.max_abs(S.R, samples)
    if curv > tol * (1 + fn.max_abs(S.field, samples)[0]):
        raise NotFlat(curv)
    try:
        k = homogeneity_degree(f, samples)
    except InsufficientSamples:
        k = 0 if fn.max_abs(f, samples)[0] <= 1e-12 else None
    if k != 0:
        raise NotHomogeneous(f"f must be 0-homogeneous, detected {k}")
    mixed = [diff(diff(f, yi(i + 1)), xi(j + 1)) - diff(diff(f, yi(j + 1)), xi(i + 1))
             for i in range(n) for j in range(i + 1, n)]
    scale = _scale([diff(diff(f, yi(i + 1)), xi(j + 1)) for i in range(n) for j in range(n)], samples)
    report = CheckReport(S.name, form_id, samples.seed, samples.m, tol, "hamel")
    report.homogeneity_degree = 0
    report.conditions.append(make_residual(C.Hamel, fn.pointwise_max(mixed, samples), samples, scale, tol))
    if not report.passed:
        return report
    F = simplify(fn.directional(S.field, f))
    report.potential = F
    theta = fn.d_A(S.h, FormField.scalar(f, n))
    if fn.max_abs(theta, samples)[0] <= 1e-12:
        report.notes.append("degenerate: d_h f vanishes, F = S(f) = 0")
        return report
    proj = projective_metrizability_check(S, theta, samples, tol, form_id=f"d_h({form_id})")
    report.conditions += [c for c in proj.conditions if c.name is not C.SemiBasic]
    report.consistent = report.consistent and proj.consistent
    report.notes += proj.notes
    return report
