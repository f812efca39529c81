"""Pointwise linear obstruction to the existence of a multiplier.

Symmetric g must make g Phi, g nabla Phi, g nabla^2 Phi symmetric and satisfy
the cyclic curvature relation.  The half-plane keeps a one-dimensional
solution space containing I/x2^2; the semispray G = (y2^3, x1 y1) has none.
"""

import numpy as np

from varinverse.catalog import builtin
from varinverse.geometry import Semispray
from varinverse.helmholtz import obstruction_rank
from varinverse.sampling import sample_points

hp = builtin("poincare-halfplane")
for rep in obstruction_rank(hp.spray, hp.samples(5)):
    known = rep.residual(np.eye(2) / rep.point.x[1] ** 2)
    print(f"x = {rep.point.x}  rank {rep.rank}  dim {rep.solution_dim}  {rep.verdict}  "
          f"residual of I/x2^2: {known:.1e}")

S = Semispray.from_strings(["y2^3", "x1*y1"], "cubic")
for rep in obstruction_rank(S, sample_points(2, 3)):
    print(f"cubic semispray: rank {rep.rank}, dim {rep.solution_dim}, {rep.verdict}")
