"""Self-test battery of the structure identities of a semispray.

Every identity is evaluated as a residual tensor at the samples; the table
records its max absolute component.  Identities that hold only for sprays
are reported as "n/a" on a semispray that is not a spray, with the
residual kept for information.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

from . import fn_calculus as fn
from .fn_calculus import FormField
from .geometry import Semispray, is_spray
from .sampling import SampleSet
from .symbolic import parse_expr

PASS, FAIL, NA, INFO = "pass", "FAIL", "n/a", "info"


@dataclass(frozen=True)
class IdentityResult:
    name: str
    residual: Optional[float]
    tol: float
    status: str
    spray_only: bool = False
    note: str = ""

    @property
    def gating(self) -> bool:
        return self.status in (PASS, FAIL)

    def to_dict(self) -> dict:
        return {"name": self.name, "max_abs": self.residual, "tol": self.tol,
                "status": self.status, "spray_only": self.spray_only, "note": self.note}


@dataclass
class IdentityReport:
    spray_id: str
    seed: Optional[int]
    count: int
    tol: float
    spray: bool
    results: List[IdentityResult]

    @property
    def passed(self) -> bool:
        return all(r.status != FAIL for r in self.results)

    def result(self, name: str) -> IdentityResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    def max_gating_residual(self) -> float:
        return max((r.residual for r in self.results if r.gating), default=0.0)

    def to_dict(self) -> dict:
        return {
            "report_version": 1,
            "problem": {"spray": self.spray_id},
            "config": {"seed": self.seed, "samples": self.count, "tol": self.tol, "mode": "identities"},
            "is_spray": self.spray,
            "identities": [r.to_dict() for r in self.results],
            "verdict": "pass" if self.passed else "fail",
        }

    def to_text(self) -> str:
        width = max(len(r.name) for r in self.results)
        lines = [f"identities for {self.spray_id} ({'spray' if self.spray else 'semispray'}), "
                 f"samples {self.count} (seed {self.seed}), tol {self.tol:g}"]
        for r in self.results:
            val = "-" if r.residual is None else f"{r.residual:.3e}"
            extra = f"  [{r.note}]" if r.note else ""
            lines.append(f"  {r.name:<{width}}  {val:>10}  {r.status}{extra}")
        lines.append(f"verdict: {'pass' if self.passed else 'fail'}")
        return "\n".join(lines)


def probe_form(n: int) -> FormField:
    """A generic polynomial 1-form used to exercise the form identities."""
    names = [f"x{i + 1}" for i in range(n)] + [f"y{i + 1}" for i in range(n)]
    D = 2 * n
    coeffs = [f"{names[(a + 1) % D]}*{names[(a + 2) % D]} + {names[a]}^2" for a in range(D)]
    return fn.one_form(n, [parse_expr(c, n) for c in coeffs])


def run_identities(S: Semispray, samples: SampleSet, tol: float = 1e-8,
                   omega: Optional[FormField] = None) -> IdentityReport:
    n = S.n
    spray = is_spray(S, samples)
    omega = probe_form(n) if omega is None else omega
    I = fn.identity(n)
    C = fn.compose
    out: List[IdentityResult] = []

    def add(name, obj, spray_only=False, info=False, note=""):
        res = obj if isinstance(obj, float) or obj is None else fn.max_abs(obj, samples)[0]
        if info:
            status = INFO
        elif spray_only and not spray:
            status = NA
        elif res is None:
            status, note = NA, note or "degree cap"
        else:
            status = PASS if res <= tol else FAIL
        out.append(IdentityResult(name, res, tol, status, spray_only, note))

    J, h, v, F, phi, R = S.J, S.h, S.v, S.F, S.phi, S.R
    add("J^2 = 0", C(J, J))
    add("J S = C", C(J, S.field) - S.liouville)
    add("N_J = 0", fn.nijenhuis(J))
    add("L_C J = -J", fn.lie_derivative_tensor(S.liouville, J) + J)
    add("Gamma^2 = Id", C(S.gamma, S.gamma) - I)
    add("h + v = Id", h + v - I)
    add("h^2 = h", C(h, h) - h)
    add("F^2 = -Id", C(F, F) + I)
    add("F J = h", C(F, J) - h)
    add("J F = v", C(J, F) - v)
    add("Phi semi-basic", C(phi, J))
    add("Phi vertical-valued", C(h, phi))
    add("R semi-basic", _r_vertical_inputs(S))
    add("[J,Phi] = 3R", fn.fn_bracket_11(J, phi) - 3.0 * R,
        note="gating form; the literal 3[J,Phi] + R = 0 is shown below")
    add("3[J,Phi] + R = 0 (literal)", 3.0 * fn.fn_bracket_11(J, phi) + R, info=True,
        note="sign/factor conflict, see decisions ledger")
    add("Phi = i_S R + v L_vS h", phi - fn.insert(S.field, R)
        - C(v, fn.lie_derivative_tensor(C(v, S.field), h)))
    add("S = h S", S.field - C(h, S.field), spray_only=True)
    add("Phi = i_S R", phi - fn.insert(S.field, R), spray_only=True)
    add("[C,S] = S", fn.lie_bracket(S.liouville, S.field) - S.field, spray_only=True)
    add("nabla h = 0", fn.nabla(S, h))
    add("nabla v = 0", fn.nabla(S, v))
    add("nabla J = 0", fn.nabla(S, J))
    add("nabla F = 0", fn.nabla(S, F))
    add("nabla S = 0", fn.nabla(S, S.field), spray_only=True)
    add("nabla C = 0", fn.nabla(S, S.liouville), spray_only=True)
    for label, A, B in (("J,h", J, h), ("J,Phi", J, phi), ("J,J", J, J)):
        res = fn.commutation_check(A, B, S.field, omega, samples)
        add(f"i_A d_B commutator ({label})", res["iadb"])
        add(f"L_X i_A commutator ({label})", res["lxia"])
        add(f"i_X d_A + d_A i_X ({label})", res["ixda"])
    add("d nabla - nabla d = d_Psi", fn.exterior_derivative(fn.nabla(S, omega))
        - fn.nabla(S, fn.exterior_derivative(omega)) - fn.d_A(S.psi, omega))
    return IdentityReport(S.name, samples.seed, samples.m, tol, spray, out)


def _r_vertical_inputs(S: Semispray):
    """R(X, Y) for X vertical, plus h applied to its output: both must vanish."""
    n = S.n
    parts = []
    for a in range(n, 2 * n):
        e = fn.vector_field(n, [1 if b == a else 0 for b in range(2 * n)])
        parts.append(fn.insert(e, S.R))
    parts.append(fn.compose(S.h, fn.insert(S.field, S.R)))
    return parts
