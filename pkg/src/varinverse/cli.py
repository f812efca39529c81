"""Command-line front end.

Exit codes: 0 when every required condition passes, 1 when one fails (or
the internal cross-checks disagree), 2 for usage and input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional

import numpy as np

from . import catalog
from .catalog import LAGRANGIAN, ZERO_HOMOG, Candidate, Problem
from .geometry import CrossCheckError, LeftDomain, integrate_geodesic, is_spray
from .helmholtz import (
    NOT_LAGRANGIAN,
    HelmholtzError,
    check_lagrangian,
    finsler_metrizability_check,
    form_degree,
    hamel_check,
    helmholtz_residuals,
    homogeneous_check,
    multiplier_residuals,
    obstruction_rank,
    potential,
    projective_metrizability_check,
)
from .helmholtz.report import REPORT_VERSION
from .identities import run_identities
from .sampling import PhasePoint, ZeroSectionError
from .symbolic import DomainError, ExprSyntaxError, IndexOutOfRange, InsufficientSamples, Program

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
MIN_SAMPLES = 8


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    builtin: Optional[str] = None
    file: Optional[str] = None
    candidate: Optional[str] = None
    kind: str = "auto"
    tol: Optional[float] = None
    samples: Optional[int] = None
    seed: Optional[int] = None
    format: str = "text"
    order: int = 2
    x0: Optional[List[float]] = None
    y0: Optional[List[float]] = None
    dt: float = 0.01
    steps: int = 100
    extra: dict = field(default_factory=dict)

    def validate(self):
        if self.tol is not None and not self.tol > 0:
            raise UsageError("--tol must be positive")
        if self.samples is not None and self.samples < MIN_SAMPLES:
            raise UsageError(f"--samples must be at least {MIN_SAMPLES}")
        if self.seed is not None and self.seed < 0:
            raise UsageError("--seed must be a non-negative integer")


def _floats(text: str) -> List[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _kind(text: str) -> str:
    if text in ("auto", "full", "projective", "finsler"):
        return text
    if text.startswith("k="):
        try:
            Fraction(text[2:])
        except ValueError:
            pass
        else:
            return text
    raise argparse.ArgumentTypeError("kind must be auto, full, projective, finsler or k=<value>")


def _seed(text: str) -> int:
    try:
        return int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="varinverse",
                                     description="Helmholtz-condition checks for semisprays.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, candidate=True):
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--builtin", metavar="NAME", help="builtin example (see list-examples)")
        src.add_argument("--file", metavar="PATH", help="JSON problem file")
        if candidate:
            p.add_argument("--candidate", metavar="NAME", help="candidate name (default: the first)")
        p.add_argument("--tol", type=float, help="relative tolerance")
        p.add_argument("--samples", type=int, help="number of sample points")
        p.add_argument("--seed", type=_seed, help="sampling seed (decimal or 0x hex)")
        p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("check", help="Helmholtz conditions for a candidate")
    common(p)
    p.add_argument("--kind", type=_kind, default="auto", help="auto|full|projective|finsler|k=<value>")
    p = sub.add_parser("identities", help="structure-identity self-test")
    common(p, candidate=False)
    p = sub.add_parser("metrizability", help="projective or Finsler metrizability certificate")
    common(p)
    p.add_argument("--kind", type=_kind, default="auto", help="auto|projective|finsler")
    p = sub.add_parser("obstruction", help="pointwise rank obstruction to a multiplier")
    common(p, candidate=False)
    p.add_argument("--order", type=int, default=2, choices=(0, 1, 2),
                   help="highest covariant derivative of Phi in the family")
    p = sub.add_parser("geodesics", help="RK4 trajectory table")
    common(p)
    p.add_argument("--x0", type=_floats, required=True)
    p.add_argument("--y0", type=_floats, required=True)
    p.add_argument("--dt", type=float, default=0.01)
    p.add_argument("--steps", type=int, default=100)
    p = sub.add_parser("list-examples", help="list builtin problems")
    p.add_argument("--format", choices=("text", "json"), default="text")
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=ns.command)
    for key in ("builtin", "file", "candidate", "kind", "tol", "samples", "seed", "format",
                "order", "x0", "y0", "dt", "steps"):
        if hasattr(ns, key):
            setattr(cfg, key, getattr(ns, key))
    cfg.validate()
    return cfg


# ---------------------------------------------------------------------------


def _problem(cfg: RunConfig) -> Problem:
    if cfg.builtin:
        return catalog.builtin(cfg.builtin)
    return catalog.load_problem(cfg.file)


def _candidate(cfg: RunConfig, P: Problem, kinds=None) -> Candidate:
    if cfg.candidate:
        c = P.candidate(cfg.candidate)
        if kinds and c.kind not in kinds:
            raise UsageError(f"candidate {c.name} has kind {c.kind}; this command needs {'/'.join(kinds)}")
        return c
    for c in P.candidates:
        if kinds is None or c.kind in kinds:
            return c
    raise UsageError(f"problem {P.name} has no suitable candidate")


def _tol(cfg: RunConfig, default: float = 1e-9) -> float:
    return default if cfg.tol is None else cfg.tol


def _emit(cfg: RunConfig, text: str, data: dict, out):
    if cfg.format == "json":
        out.write(json.dumps(data, indent=2) + "\n")
    else:
        out.write(text + "\n")


def _k_of(kind: str):
    if kind == "projective":
        return Fraction(1)
    if kind == "finsler":
        return Fraction(2)
    if kind.startswith("k="):
        return Fraction(kind[2:])
    return None


def cmd_check(cfg: RunConfig, out=sys.stdout) -> int:
    P = _problem(cfg)
    c = _candidate(cfg, P)
    samples = P.samples(cfg.samples, cfg.seed)
    tol = _tol(cfg)
    S = P.spray
    if c.kind == ZERO_HOMOG:
        report = hamel_check(S, c.scalar, samples, tol, form_id=c.name)
        _emit(cfg, report.to_text(), report.to_dict(), out)
        return EXIT_OK if report.passed else EXIT_FAIL
    theta = c.theta(S.n)
    k = _k_of(cfg.kind)
    if cfg.kind == "auto":
        deg = form_degree(theta, samples)
        if deg is not None and deg + 1 not in (0, -1) and is_spray(S, samples):
            k = deg + 1
    if k is None:
        report = helmholtz_residuals(S, theta, samples, tol, form_id=c.name)
        homog = form_degree(theta, samples)
        if homog is not None:
            report.homogeneity_degree = homog
        if cfg.kind == "auto":
            report.notes.append("no reduced branch applies; all four conditions required")
    else:
        report = homogeneous_check(S, theta, samples, tol, form_id=c.name, k=k)
        if report.passed and k != 0:
            try:
                report.potential = potential(S, theta, k, samples, tol)
            except HelmholtzError as exc:
                report.notes.append(f"potential not recovered: {exc}")
    mult, _ = multiplier_residuals(S, theta, samples, tol, form_id=c.name)
    report.extra["multiplier"] = {"verdict": mult.verdict,
                                  "conditions": [r.to_dict() for r in mult.conditions]}
    agrees = mult.passed == all(report.condition(n).passed for n in
                                (r.name for r in mult.conditions if r.required))
    if not agrees:
        report.consistent = False
        report.notes.append("intrinsic and multiplier verdicts disagree")
    if c.kind == LAGRANGIAN:
        el = check_lagrangian(S, c.scalar, samples, tol, form_id=c.name)
        for r in el.conditions:
            report.conditions.append(type(r)(r.name, r.max_abs, r.argmax_point, r.scale, r.tol, False))
    text = report.to_text() + f"\nmultiplier route: {mult.verdict}"
    _emit(cfg, text, report.to_dict(), out)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_identities(cfg: RunConfig, out=sys.stdout) -> int:
    P = _problem(cfg)
    samples = P.samples(cfg.samples, cfg.seed)
    report = run_identities(P.spray, samples, _tol(cfg, 1e-8))
    _emit(cfg, report.to_text(), report.to_dict(), out)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_metrizability(cfg: RunConfig, out=sys.stdout) -> int:
    P = _problem(cfg)
    c = _candidate(cfg, P)
    samples = P.samples(cfg.samples, cfg.seed)
    tol = _tol(cfg)
    S = P.spray
    if c.kind == ZERO_HOMOG:
        report = hamel_check(S, c.scalar, samples, tol, form_id=c.name)
    else:
        theta = c.theta(S.n)
        kind = cfg.kind
        if kind == "auto":
            deg = form_degree(theta, samples)
            kind = {0: "projective", 1: "finsler"}.get(deg)
            if kind is None:
                raise UsageError(f"form degree {deg} fits neither projective (0) nor Finsler (1) metrizability")
        if kind == "projective":
            report = projective_metrizability_check(S, theta, samples, tol, form_id=c.name)
        elif kind == "finsler":
            report = finsler_metrizability_check(S, theta, samples, tol, form_id=c.name)
        else:
            raise UsageError("metrizability --kind must be auto, projective or finsler")
    _emit(cfg, report.to_text(), report.to_dict(), out)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_obstruction(cfg: RunConfig, out=sys.stdout) -> int:
    P = _problem(cfg)
    samples = P.samples(cfg.samples, cfg.seed)
    reports = obstruction_rank(P.spray, samples, cfg.order)
    verdicts = sorted({r.verdict for r in reports})
    overall = NOT_LAGRANGIAN if NOT_LAGRANGIAN in verdicts else verdicts[0] if len(verdicts) == 1 else "mixed"
    lines = [f"obstruction rank for {P.spray.name}, family order {cfg.order}, "
             f"samples {samples.m} (seed {samples.seed})",
             f"  {'#':>3}  {'rows':>4}  {'rank':>4}  {'dim':>3}  verdict  point"]
    for i, r in enumerate(reports):
        flag = " (heuristic)" if r.heuristic else ""
        lines.append(f"  {i:>3}  {r.shape[0]:>4}  {r.rank:>4}  {r.solution_dim:>3}  "
                     f"{r.verdict}{flag}  x={list(r.point.x)}, y={list(r.point.y)}")
    lines.append(f"reading: {reports[0].reading}" if reports else "no points")
    lines.append(f"verdict: {overall}")
    data = {"report_version": REPORT_VERSION,
            "problem": {"spray": P.spray.name},
            "config": {"seed": samples.seed, "samples": samples.m, "order": cfg.order, "mode": "obstruction"},
            "reading": reports[0].reading if reports else "",
            "points": [r.to_dict() for r in reports],
            "verdict": overall}
    _emit(cfg, "\n".join(lines), data, out)
    return EXIT_FAIL if overall == NOT_LAGRANGIAN else EXIT_OK


def cmd_geodesics(cfg: RunConfig, out=sys.stdout) -> int:
    P = _problem(cfg)
    n = P.n
    if len(cfg.x0) != n or len(cfg.y0) != n:
        raise UsageError(f"--x0 and --y0 need {n} components")
    if not cfg.dt > 0 or cfg.steps < 1:
        raise UsageError("need --dt > 0 and --steps >= 1")
    L = None
    if cfg.candidate:
        c = P.candidate(cfg.candidate)
        if c.kind != LAGRANGIAN:
            raise UsageError("geodesics --candidate must name a Lagrangian")
        L = c.scalar
    p0 = PhasePoint(cfg.x0, cfg.y0, y_min=0.0)
    traj = integrate_geodesic(P.spray, p0, cfg.dt, cfg.steps, y_min=P.y_min)
    cols = ["t"] + [f"x{i + 1}" for i in range(n)] + [f"y{i + 1}" for i in range(n)]
    table = np.column_stack([traj.t, traj.x, traj.y])
    if L is not None:
        cols.append("L")
        table = np.column_stack([table, Program([L])(traj.samples())[0]])
    lines = ["  ".join(f"{c:>12}" for c in cols)]
    lines += ["  ".join(f"{v:12.6f}" for v in row) for row in table]
    data = {"report_version": REPORT_VERSION, "problem": {"spray": P.spray.name},
            "config": {"x0": list(p0.x), "y0": list(p0.y), "dt": cfg.dt, "steps": cfg.steps,
                       "mode": "geodesics"},
            "columns": cols, "rows": table.tolist()}
    if L is not None:
        data["lagrangian_drift"] = float(np.abs(table[:, -1] - table[0, -1]).max())
    _emit(cfg, "\n".join(lines), data, out)
    return EXIT_OK


def cmd_list_examples(cfg: RunConfig, out=sys.stdout) -> int:
    entries = []
    for name in catalog.builtin_names():
        P = catalog.builtin(name)
        entries.append({"name": name, "n": P.n, "description": P.description,
                        "G": [str(g) for g in P.spray.G],
                        "candidates": [{"name": c.name, "kind": c.kind,
                                        "payload": [str(e) for e in c.payload],
                                        "expected": c.expected} for c in P.candidates]})
    lines = []
    for e in entries:
        lines.append(f"{e['name']} (n={e['n']}): {e['description']}")
        for c in e["candidates"]:
            exp = ", ".join(f"{k}={v}" for k, v in (c["expected"] or {}).items())
            lines.append(f"  {c['name']:<16} {c['kind']:<18} {'; '.join(c['payload'])}"
                         + (f"   [{exp}]" if exp else ""))
    _emit(cfg, "\n".join(lines), {"report_version": REPORT_VERSION, "examples": entries}, out)
    return EXIT_OK


COMMANDS = {
    "check": cmd_check,
    "identities": cmd_identities,
    "metrizability": cmd_metrizability,
    "obstruction": cmd_obstruction,
    "geodesics": cmd_geodesics,
    "list-examples": cmd_list_examples,
}

_INPUT_ERRORS = (UsageError, catalog.UnknownExample, catalog.SchemaError, catalog.SingularMetric,
                 ExprSyntaxError, IndexOutOfRange, HelmholtzError, InsufficientSamples,
                 ZeroSectionError, DomainError, OSError, ValueError)


def main(argv: Optional[List[str]] = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = config_from_args(ns)
        return COMMANDS[cfg.command](cfg, out)
    except LeftDomain as exc:
        err.write(f"error: {exc}\n")
        return EXIT_FAIL
    except CrossCheckError as exc:
        err.write(f"internal cross-check failed: {exc}\n")
        return EXIT_FAIL
    except _INPUT_ERRORS as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
