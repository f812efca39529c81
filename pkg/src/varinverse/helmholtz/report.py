"""Residual records and check reports, with a versioned JSON form."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional

from ..sampling import PhasePoint, SampleSet
from ..symbolic import Expr

REPORT_VERSION = 1


class ConditionName(str, Enum):
    DhTheta = "DhTheta"
    DJTheta = "DJTheta"
    NablaDTheta = "NablaDTheta"
    DPhiTheta = "DPhiTheta"
    ClosedLSTheta = "ClosedLSTheta"
    SemiBasic = "SemiBasic"
    Homogeneity = "Homogeneity"
    EulerLagrange = "EulerLagrange"
    DhL = "DhL"
    Hamel = "Hamel"
    # additions beyond the four Helmholtz conditions
    ExactLSTheta = "ExactLSTheta"   # k L_S theta = d i_S theta
    Rapcsak = "Rapcsak"             # i_S d d_J F = 0
    PotentialDJ = "PotentialDJ"     # d_J L - theta
    SymmetricDg = "SymmetricDg"     # dg_ij/dy^k = dg_ik/dy^j


@dataclass(frozen=True)
class ConditionResidual:
    """Max residual of one condition over a sample set.

    The verdict is relative: pass iff ``max_abs <= tol * (1 + scale)``.
    Conditions with ``required=False`` are reported but do not gate the
    overall verdict.
    """

    name: ConditionName
    max_abs: float
    argmax_point: PhasePoint
    scale: float
    tol: float
    required: bool = True

    @property
    def passed(self) -> bool:
        return self.max_abs <= self.tol * (1.0 + self.scale)

    def to_dict(self) -> dict:
        return {
            "name": self.name.value,
            "max_abs": self.max_abs,
            "scale": self.scale,
            "tol": self.tol,
            "pass": self.passed,
            "required": self.required,
            "argmax_point": self.argmax_point.as_dict(),
        }


def make_residual(name: ConditionName, values, samples: SampleSet, scale: float, tol: float,
                  required: bool = True) -> ConditionResidual:
    """Build a residual from per-point max values (array of length m)."""
    i = int(values.argmax()) if len(values) else 0
    return ConditionResidual(name, float(values[i]) if len(values) else 0.0,
                             samples.point(i), float(scale), float(tol), required)


@dataclass
class CheckReport:
    spray_id: str
    form_id: str
    seed: Optional[int]
    count: int
    tol: float
    mode: str
    conditions: List[ConditionResidual] = field(default_factory=list)
    homogeneity_degree: Optional[Fraction] = None
    potential: Optional[Expr] = None
    consistent: bool = True
    notes: List[str] = field(default_factory=list)
    extra: Dict[str, Any] = field(default_factory=dict)

    def condition(self, name: ConditionName) -> Optional[ConditionResidual]:
        for c in self.conditions:
            if c.name is name:
                return c
        return None

    def residual(self, name: ConditionName) -> float:
        c = self.condition(name)
        if c is None:
            raise KeyError(name)
        return c.max_abs

    def set_required(self, names) -> None:
        names = set(names)
        self.conditions = [ConditionResidual(c.name, c.max_abs, c.argmax_point, c.scale, c.tol,
                                             c.name in names) for c in self.conditions]

    @property
    def passed(self) -> bool:
        return self.consistent and all(c.passed for c in self.conditions if c.required)

    @property
    def verdict(self) -> str:
        if not self.consistent:
            return "inconsistent"
        return "pass" if self.passed else "fail"

    def failing(self) -> List[ConditionResidual]:
        return [c for c in self.conditions if c.required and not c.passed]

    def to_dict(self) -> dict:
        out = {
            "report_version": REPORT_VERSION,
            "problem": {"spray": self.spray_id, "form": self.form_id},
            "config": {"seed": self.seed, "samples": self.count, "tol": self.tol, "mode": self.mode},
            "conditions": [c.to_dict() for c in self.conditions],
            "verdict": self.verdict,
        }
        if self.potential is not None:
            out["potential"] = str(self.potential)
        if self.homogeneity_degree is not None:
            out["homogeneity_degree"] = str(self.homogeneity_degree)
        if self.notes:
            out["notes"] = list(self.notes)
        if self.extra:
            out["extra"] = self.extra
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)

    def to_text(self) -> str:
        lines = [f"spray {self.spray_id}, form {self.form_id}, mode {self.mode}",
                 f"samples {self.count} (seed {self.seed}), tol {self.tol:g}"]
        if self.homogeneity_degree is not None:
            lines.append(f"homogeneity degree of form: {self.homogeneity_degree}")
        width = max((len(c.name.value) for c in self.conditions), default=4)
        for c in self.conditions:
            flag = "pass" if c.passed else "FAIL"
            if not c.required:
                flag += " (info)"
            where = ""
            if not c.passed:
                p = c.argmax_point
                where = f"  at x={list(p.x)}, y={list(p.y)}"
            lines.append(f"  {c.name.value:<{width}}  {c.max_abs:.3e}  scale {c.scale:.3g}  {flag}{where}")
        if self.potential is not None:
            lines.append(f"potential: {self.potential}")
        for note in self.notes:
            lines.append(f"note: {note}")
        lines.append(f"verdict: {self.verdict}")
        return "\n".join(lines)
