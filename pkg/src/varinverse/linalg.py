"""Rank and null space of small dense matrices by Gauss-Jordan with full pivoting."""

from __future__ import annotations

from typing import Tuple

import numpy as np

REL_TOL = 1e-8
ABS_TOL = 1e-12


def eliminate(M, rel_tol: float = REL_TOL, abs_tol: float = ABS_TOL) -> Tuple[int, np.ndarray, np.ndarray]:
    """Reduce ``M`` in place of a copy; return (rank, reduced matrix, column permutation).

    A pivot counts when it exceeds both ``rel_tol`` times the largest pivot
    (the first one, under full pivoting) and the absolute floor ``abs_tol``.
    The reduced matrix has the identity in its leading rank x rank block
    with respect to the permuted columns.
    """
    A = np.array(M, dtype=float, copy=True)
    if A.ndim != 2:
        raise ValueError("expected a 2-D matrix")
    rows, cols = A.shape
    perm = np.arange(cols)
    rank = 0
    largest = None
    for k in range(min(rows, cols)):
        sub = np.abs(A[k:, k:])
        i, j = np.unravel_index(np.argmax(sub), sub.shape)
        p = sub[i, j]
        if largest is None:
            largest = p
        if p <= max(rel_tol * largest, abs_tol):
            break
        i += k
        j += k
        A[[k, i]] = A[[i, k]]
        A[:, [k, j]] = A[:, [j, k]]
        perm[[k, j]] = perm[[j, k]]
        A[k] /= A[k, k]
        for r in range(rows):
            if r != k and A[r, k] != 0.0:
                A[r] -= A[r, k] * A[k]
        rank += 1
    return rank, A, perm


def rank_full_pivot(M, rel_tol: float = REL_TOL, abs_tol: float = ABS_TOL) -> int:
    return eliminate(M, rel_tol, abs_tol)[0]


def null_space(M, rel_tol: float = REL_TOL, abs_tol: float = ABS_TOL) -> np.ndarray:
    """Basis of the numerical null space as columns, shape (cols, cols - rank)."""
    M = np.atleast_2d(np.asarray(M, dtype=float))
    cols = M.shape[1]
    if M.shape[0] == 0:
        return np.eye(cols)
    rank, A, perm = eliminate(M, rel_tol, abs_tol)
    basis = np.zeros((cols, cols - rank))
    for f in range(rank, cols):
        x = np.zeros(cols)
        x[f] = 1.0
        x[:rank] = -A[:rank, f]
        out = np.empty(cols)
        out[perm] = x
        basis[:, f - rank] = out
    return basis
