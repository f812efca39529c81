"""Pointwise algebraic obstructions to the existence of a multiplier.

Once d_h theta = 0 and d_J theta = 0, the 2-form d theta = 2 g_ij dy^j ^ dx^i
(adapted frame) is fixed by a symmetric n x n matrix g.  Each semi-basic
(1,1) tensor A in the family {Phi, nabla Phi, nabla^2 Phi} must satisfy
i_A d theta = 0, i.e. g A symmetric, and the curvature adds i_R d theta = 0.
At a point these are linear equations in the n(n+1)/2 entries of g, and
their rank bounds the solution space.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import List

import numpy as np

from .. import fn_calculus as fn
from ..geometry import Semispray
from ..linalg import eliminate, null_space
from ..sampling import PhasePoint, SampleSet

NO_OBSTRUCTION = "NoObstruction"
ONLY_DEGENERATE = "OnlyDegenerate"
NOT_LAGRANGIAN = "NotLagrangianPerPaper"

READING = ("rank of the linear constraint system on symmetric g induced by "
           "i_A d theta = 0 for A in {Phi, nabla Phi, ...} and i_R d theta = 0")


def sym_basis(n: int) -> List[np.ndarray]:
    """Basis E_ij (i <= j) of symmetric n x n matrices, in row-major (i, j) order."""
    out = []
    for i in range(n):
        for j in range(i, n):
            E = np.zeros((n, n))
            E[i, j] = E[j, i] = 1.0
            out.append(E)
    return out


def sym_vector(g: np.ndarray) -> np.ndarray:
    n = g.shape[0]
    return np.array([g[i, j] for i in range(n) for j in range(i, n)])


def sym_matrix(vec: np.ndarray, n: int) -> np.ndarray:
    g = np.zeros((n, n))
    k = 0
    for i in range(n):
        for j in range(i, n):
            g[i, j] = g[j, i] = vec[k]
            k += 1
    return g


def rows_11(A: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Components of (1/2) i_A d theta on (d/dx^i, d/dx^j), i < j:  g_jk A^k_i - g_ik A^k_j."""
    gA = g @ A
    n = g.shape[0]
    return np.array([gA[j, i] - gA[i, j] for i, j in combinations(range(n), 2)])


def rows_R(R: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Components of (1/2) i_R d theta on (d/dx^i, d/dx^j, d/dx^l), i < j < l.

    ``R[k, i, j]`` is R(d/dx^i, d/dx^j)^{y^k}, antisymmetric in (i, j).
    """
    n = g.shape[0]
    out = []
    for i, j, l in combinations(range(n), 3):
        out.append(g[l] @ R[:, i, j] - g[j] @ R[:, i, l] + g[i] @ R[:, j, l])
    return np.array(out)


def constraint_matrix(blocks: List[np.ndarray], R: np.ndarray, n: int) -> np.ndarray:
    """Stack the linear constraints; column p is the image of the p-th symmetric basis matrix."""
    cols = []
    for E in sym_basis(n):
        parts = [rows_11(A, E) for A in blocks]
        if R is not None:
            parts.append(rows_R(R, E))
        cols.append(np.concatenate(parts) if parts else np.zeros(0))
    return np.array(cols).T.reshape(-1, len(cols))


@dataclass
class ObstructionReport:
    point: PhasePoint
    shape: tuple
    rank: int
    solution_dim: int
    verdict: str
    heuristic: bool = False
    matrix: np.ndarray = field(default=None, repr=False)
    null_basis: np.ndarray = field(default=None, repr=False)
    reading: str = READING

    def residual(self, g: np.ndarray) -> float:
        """Max |M vec(g)| for a candidate symmetric g."""
        if self.matrix.size == 0:
            return 0.0
        return float(np.abs(self.matrix @ sym_vector(g)).max())

    def to_dict(self) -> dict:
        return {
            "point": self.point.as_dict(),
            "rows": int(self.shape[0]),
            "cols": int(self.shape[1]),
            "rank": self.rank,
            "solution_dim": self.solution_dim,
            "verdict": self.verdict,
            "heuristic": self.heuristic,
        }


def family(S: Semispray, order: int):
    if not 0 <= order <= 2:
        raise ValueError("derivative order must be 0, 1 or 2")
    out = [S.phi]
    for _ in range(order):
        out.append(fn.nabla(S, out[-1]))
    return out


def obstruction_rank(S: Semispray, samples: SampleSet, order: int = 2, rel_tol: float = 1e-8,
                     abs_tol: float = 1e-10, det_tol: float = 1e-10, combos: int = 8
                     ) -> List[ObstructionReport]:
    """Rank of the constraints on symmetric g at every sample point.

    ``abs_tol`` is scaled by (1 + max entry of the family at the point) so that
    round-off in tensors that vanish analytically does not count as rank.
    """
    n = S.n
    fam = family(S, order)
    mats = [fn.matrix_values(A, samples) for A in fam]
    Rvals = fn.component_values(S.R, samples)
    rng = np.random.default_rng(0)
    reports = []
    for p in range(samples.m):
        blocks = [M[p, n:, :n] for M in mats]
        R = np.zeros((n, n, n))
        for (a, (i, j)), v in Rvals.items():
            if a >= n and i < n and j < n:
                R[a - n, i, j] = v[p]
                R[a - n, j, i] = -v[p]
        M = constraint_matrix(blocks, R, n)
        size = max([np.abs(b).max() for b in blocks] + [np.abs(R).max()])
        floor = abs_tol * (1 + size)
        unknowns = n * (n + 1) // 2
        if M.shape[0] == 0:
            rank = 0
        else:
            rank = eliminate(M, rel_tol, floor)[0]
        dim = unknowns - rank
        basis = null_space(M, rel_tol, floor) if M.shape[0] else np.eye(unknowns)
        heuristic = False
        if dim == 0:
            verdict = NOT_LAGRANGIAN
        else:
            cands = [basis[:, c] for c in range(basis.shape[1])]
            for _ in range(combos):
                cands.append(basis @ rng.standard_normal(basis.shape[1]))
            singular = True
            for vec in cands:
                g = sym_matrix(vec, n)
                ref = np.abs(g).max() ** n
                if ref > 0 and abs(np.linalg.det(g)) >= det_tol * ref:
                    singular = False
                    break
            if singular:
                verdict, heuristic = ONLY_DEGENERATE, True
            else:
                verdict = NO_OBSTRUCTION
        reports.append(ObstructionReport(samples.point(p), M.shape, rank, dim, verdict, heuristic, M, basis))
    return reports
