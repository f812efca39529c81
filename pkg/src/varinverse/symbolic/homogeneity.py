"""Numerical detection of positive homogeneity in the fiber coordinates."""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

import numpy as np

from ..sampling import SampleSet
from .calculus import diff
from .evaluate import evaluate_many
from .expr import Expr, total, y

MIN_SAMPLES = 8


class InsufficientSamples(ValueError):
    """Too few sample points where the field is safely non-zero."""


def euler_derivative(f: Expr, n: int) -> Expr:
    """Liouville derivative  sum_i y^i df/dy^i."""
    return total(y(i) * diff(f, y(i).coord) for i in range(1, n + 1))


def homogeneity_degree(f: Expr, samples: SampleSet, agree_tol: float = 1e-7,
                       scale_tol: float = 1e-8) -> Optional[Fraction]:
    """Degree k with  f(x, t y) = t^k f(x, y), or None.

    The Euler ratio (C f)/f is computed at every admissible point
    (|f| > 1e-8).  If the ratios agree within ``agree_tol`` the common
    value is rounded to a rational with denominator <= 4 and confirmed by
    the scaling test f(x, 2y) = 2^k f(x, y) at eight points.
    """
    n = samples.n
    vals, euler = evaluate_many([f, euler_derivative(f, n)], samples)
    ok = np.abs(vals) > 1e-8
    if ok.sum() < MIN_SAMPLES:
        raise InsufficientSamples(
            f"need {MIN_SAMPLES} points with |f| > 1e-8, have {int(ok.sum())}")
    ratios = euler[ok] / vals[ok]
    if ratios.max() - ratios.min() > agree_tol:
        return None
    k = Fraction(float(np.mean(ratios))).limit_denominator(4)
    if abs(float(k) - np.mean(ratios)) > agree_tol:
        return None
    idx = np.flatnonzero(ok)[:MIN_SAMPLES]
    sub = samples.subset(idx)
    base = vals[idx]
    doubled = evaluate_many([f], sub.scale_fiber(2.0))[0]
    expected = 2.0 ** float(k) * base
    if np.any(np.abs(doubled - expected) > scale_tol * np.abs(expected)):
        return None
    return k
