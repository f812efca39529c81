"""Check candidate Poincare-Cartan forms against the flat and hyperbolic sprays.

The energy passes all four conditions, the asymmetric form y2 dx1 fails d_J
and the report points at the sample where the residual peaks.
"""

from varinverse.catalog import builtin
from varinverse.helmholtz import helmholtz_residuals, multiplier_residuals

for name in ("flat2d", "poincare-halfplane"):
    P = builtin(name)
    s = P.samples()
    for cand in ("energy", "asym"):
        theta = P.candidate(cand).theta(P.n)
        rep = helmholtz_residuals(P.spray, theta, s, form_id=cand)
        mult, _ = multiplier_residuals(P.spray, theta, s, intrinsic=rep)
        print(rep.to_text())
        print(f"multiplier route agrees: {mult.passed == rep.passed}\n")
