"""Built-in example problems and the JSON problem-file loader.

A problem bundles a semispray, its sampling chart and a list of candidates.
Each candidate is a semi-basic 1-form, a Lagrangian (whose Poincare-Cartan
form d_J L is checked) or a 0-homogeneous function for Hamel's test.
Expected verdicts are stored only for fixtures whose outcome is pinned by an
oracle in the test suite.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import fn_calculus as fn
from .fn_calculus import FormField
from .geometry import Semispray, tangent_structure
from .sampling import DEFAULT_SEED, DEFAULT_Y_MIN, SampleSet, sample_points
from .symbolic import Expr, Kind, Program, as_expr, diff, parse_expr, simplify, total, xi

ONE_FORM = "OneForm"
LAGRANGIAN = "Lagrangian"
ZERO_HOMOG = "ZeroHomogFunction"
KINDS = (ONE_FORM, LAGRANGIAN, ZERO_HOMOG)


class UnknownExample(KeyError):
    def __init__(self, name: str, known: Sequence[str] = ()):
        self.name = name
        msg = f"unknown example {name!r}"
        if known:
            msg += f"; known: {', '.join(known)}"
        super().__init__(msg)

    def __str__(self):
        return self.args[0]


class SchemaError(ValueError):
    """A problem file does not match the schema; ``path`` locates the field."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


class SingularMetric(ValueError):
    def __init__(self, point):
        self.point = point
        super().__init__(f"metric is singular at x={list(point.x)}")


@dataclass(frozen=True)
class Candidate:
    name: str
    kind: str
    payload: Tuple[Expr, ...]   # n one-form coefficients, or a single scalar
    expected: Optional[Dict[str, str]] = None
    note: str = ""

    @property
    def scalar(self) -> Expr:
        if self.kind == ONE_FORM:
            raise TypeError("a one-form candidate has no scalar payload")
        return self.payload[0]

    def theta(self, n: int) -> FormField:
        """Semi-basic form to check: the coefficients, or d_J of a Lagrangian."""
        if self.kind == ONE_FORM:
            return fn.semibasic_form(n, list(self.payload))
        if self.kind == LAGRANGIAN:
            return fn.d_A(tangent_structure(n), FormField.scalar(self.scalar, n))
        raise TypeError("a 0-homogeneous function is checked with Hamel's test, not as a form")


@dataclass(frozen=True)
class Problem:
    name: str
    n: int
    spray: Semispray
    candidates: Tuple[Candidate, ...] = ()
    box_x: Optional[Tuple[Tuple[float, float], ...]] = None
    box_y: Optional[Tuple[Tuple[float, float], ...]] = None
    y_min: float = DEFAULT_Y_MIN
    seed: int = DEFAULT_SEED
    count: int = 20
    description: str = ""
    metric: Optional[Tuple[Tuple[Expr, ...], ...]] = None

    def samples(self, count: Optional[int] = None, seed: Optional[int] = None) -> SampleSet:
        return sample_points(self.n, self.count if count is None else count,
                             self.seed if seed is None else seed,
                             box_x=self.box_x, box_y=self.box_y, y_min=self.y_min)

    def candidate(self, name: str) -> Candidate:
        for c in self.candidates:
            if c.name == name:
                return c
        raise UnknownExample(f"{self.name}:{name}", [c.name for c in self.candidates])


# ---------------------------------------------------------------------------
# Riemannian sprays


def _det(M):
    n = len(M)
    if n == 1:
        return M[0][0]
    if n == 2:
        return M[0][0] * M[1][1] - M[0][1] * M[1][0]
    return total(((-1) ** j) * M[0][j] * _det(_minor(M, 0, j)) for j in range(n))


def _minor(M, i, j):
    return [[M[r][c] for c in range(len(M)) if c != j] for r in range(len(M)) if r != i]


def _adjugate(M):
    n = len(M)
    if n == 1:
        return [[as_expr(1)]]
    return [[((-1) ** (i + j)) * _det(_minor(M, j, i)) for j in range(n)] for i in range(n)]


def riemannian_spray(metric, samples: Optional[SampleSet] = None, name: str = "riemannian") -> Semispray:
    """Geodesic spray G^i = 1/2 Gamma^i_jk y^j y^k of a metric g_ij(x).

    The inverse uses the adjugate, so n <= 3.  When ``samples`` is given the
    metric is checked to be invertible there.
    """
    n = len(metric)
    if not 1 <= n <= 3:
        raise ValueError("riemannian_spray supports 1 <= n <= 3")
    g = [[e if isinstance(e, Expr) else parse_expr(str(e), n) for e in row] for row in metric]
    if any(len(row) != n for row in g):
        raise ValueError("metric must be square")
    for i in range(n):
        for j in range(n):
            if any(c.kind is Kind.FIBER for c in g[i][j].variables):
                raise ValueError(f"metric entry ({i + 1},{j + 1}) depends on y")
            if g[i][j] != g[j][i]:
                raise ValueError(f"metric is not symmetric at ({i + 1},{j + 1})")
    det = _det(g)
    if samples is not None:
        sub = SampleSet(samples.X, samples.Y, y_min=0.0)
        d = Program([det])(sub)[0]
        i = int(np.argmin(np.abs(d)))
        if abs(d[i]) <= 1e-12:
            raise SingularMetric(samples.point(i))
    adj = _adjugate(g)
    ginv = [[adj[i][j] / det for j in range(n)] for i in range(n)]
    dg = [[[diff(g[a][b], xi(c + 1)) for c in range(n)] for b in range(n)] for a in range(n)]
    ys = [parse_expr(f"y{i + 1}", n) for i in range(n)]
    G = []
    for i in range(n):
        terms = []
        for j in range(n):
            for k in range(n):
                # Gamma_{l,jk} = 1/2 (d_j g_lk + d_k g_lj - d_l g_jk)
                low = total(ginv[i][l] * (dg[l][k][j] + dg[l][j][k] - dg[j][k][l]) for l in range(n))
                terms.append(0.25 * low * ys[j] * ys[k])
        G.append(simplify(total(terms)))
    return Semispray(n, tuple(G), name)


# ---------------------------------------------------------------------------
# Builtins


def _cands(n: int, specs) -> Tuple[Candidate, ...]:
    out = []
    for name, kind, payload, expected, note in specs:
        exprs = tuple(parse_expr(p, n) for p in ([payload] if isinstance(payload, str) else payload))
        out.append(Candidate(name, kind, exprs, expected, note))
    return tuple(out)


def _flat2d() -> Problem:
    n = 2
    return Problem("flat2d", n, Semispray.from_strings(["0", "0"], "flat2d"), _cands(n, [
        ("energy", LAGRANGIAN, "y1^2 + y2^2", {"check": "pass", "finsler": "pass"}, "Euclidean energy"),
        ("norm", LAGRANGIAN, "sqrt(y1^2 + y2^2)", {"check": "pass", "projective": "pass"}, "Euclidean norm"),
        ("asym", ONE_FORM, ["y2", "0"], {"check": "fail"}, "fails d_J theta"),
        ("asym-norm", ONE_FORM, ["y2/sqrt(y1^2 + y2^2)", "0"], {"projective": "fail"},
         "0-homogeneous asymmetric form"),
        ("product", LAGRANGIAN, "y1*y2", {"check": "pass", "finsler": "pass"}, "indefinite energy"),
        ("hamel", ZERO_HOMOG, "x1 + x2", {"hamel": "pass"}, "F = y1 + y2"),
        ("hamel-surrogate", ZERO_HOMOG, "x1*y1/sqrt(y1^2 + y2^2)", {"hamel": "fail"},
         "verdict fixed by the finite-difference oracle"),
        ("hamel-constant", ZERO_HOMOG, "3", {"hamel": "pass"}, "degenerate, F = 0"),
    ]), description="flat spray G = 0 on R^2")


def _halfplane() -> Problem:
    n = 2
    S = Semispray.from_strings(["-y1*y2/x2", "(y1^2 - y2^2)/(2*x2)"], "poincare-halfplane")
    return Problem("poincare-halfplane", n, S, _cands(n, [
        ("energy", LAGRANGIAN, "(y1^2 + y2^2)/x2^2", {"check": "pass", "finsler": "pass"}, "hyperbolic energy"),
        ("norm", LAGRANGIAN, "sqrt(y1^2 + y2^2)/x2", {"check": "pass", "projective": "pass"}, "hyperbolic norm"),
        ("asym", ONE_FORM, ["y2/x2^2", "0"], {"check": "fail"}, "fails d_J theta"),
    ]), box_x=((-1.0, 1.0), (0.5, 2.0)), description="geodesic spray of g = I/x2^2 on x2 > 0")


def _damped1d() -> Problem:
    n = 1
    S = Semispray.from_strings(["y1/2"], "damped1d")
    return Problem("damped1d", n, S, _cands(n, [
        ("log", ONE_FORM, ["2*log(y1)"], {"check": "pass"}, "multiplier g = 1/y1"),
    ]), box_y=((0.2, 2.0),), description="x'' + x' = 0, a semispray that is not a spray, on y1 > 0")


def _warped2d() -> Problem:
    n = 2
    metric = (("1", "0"), ("0", "x1^2 + 1"))
    g = tuple(tuple(parse_expr(e, n) for e in row) for row in metric)
    S = riemannian_spray(g, name="warped2d")
    return Problem("warped2d", n, S, _cands(n, [
        ("energy", LAGRANGIAN, "y1^2 + (x1^2 + 1)*y2^2", {"check": "pass", "finsler": "pass"}, "warped energy"),
    ]), metric=g, description="geodesic spray of diag(1, x1^2 + 1)")


_BUILTINS = {
    "flat2d": _flat2d,
    "poincare-halfplane": _halfplane,
    "damped1d": _damped1d,
    "warped2d": _warped2d,
}
_CACHE: Dict[str, Problem] = {}


def builtin_names() -> List[str]:
    return list(_BUILTINS)


def builtin(name: str) -> Problem:
    if name not in _BUILTINS:
        raise UnknownExample(name, builtin_names())
    if name not in _CACHE:
        _CACHE[name] = _BUILTINS[name]()
    return _CACHE[name]


# ---------------------------------------------------------------------------
# Problem files

_TOP = {"name", "n", "spray", "candidates", "sampling"}
_CAND = {"name", "kind", "expr", "components", "expected"}
_SAMPLING = {"box_x", "box_y", "y_min", "seed", "count"}


def _keys(obj, allowed, path):
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected an object")
    extra = sorted(set(obj) - allowed)
    if extra:
        raise SchemaError(f"{path}.{extra[0]}" if path else extra[0], "unknown key")


def _strings(value, path, count=None):
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise SchemaError(path, "expected a list of strings")
    if count is not None and len(value) != count:
        raise SchemaError(path, f"expected {count} entries")
    return value


def _box(value, path, n):
    if not isinstance(value, list) or len(value) != n:
        raise SchemaError(path, f"expected {n} entries")
    out = []
    for i, iv in enumerate(value):
        if (not isinstance(iv, list) or len(iv) != 2
                or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in iv)
                or not iv[0] < iv[1]):
            raise SchemaError(f"{path}[{i}]", "expected [lo, hi] with lo < hi")
        out.append((float(iv[0]), float(iv[1])))
    return tuple(out)


def problem_from_dict(data: dict, source: str = "<dict>") -> Problem:
    _keys(data, _TOP, "")
    for key in ("name", "n", "spray"):
        if key not in data:
            raise SchemaError(key, "missing")
    name = data["name"]
    if not isinstance(name, str):
        raise SchemaError("name", "expected a string")
    n = data["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise SchemaError("n", "expected a positive integer")
    sp = data["spray"]
    if not isinstance(sp, dict):
        raise SchemaError("spray", "expected an object")
    _keys(sp, {"G", "metric"}, "spray")
    metric = None
    if ("G" in sp) == ("metric" in sp):
        raise SchemaError("spray", "give exactly one of G or metric")
    if "G" in sp:
        G = _strings(sp["G"], "G", n)
        spray = Semispray(n, tuple(parse_expr(e, n) for e in G), name)
    else:
        rows = sp["metric"]
        if not isinstance(rows, list) or len(rows) != n:
            raise SchemaError("spray.metric", f"expected {n} rows")
        metric = tuple(tuple(parse_expr(e, n) for e in _strings(r, f"spray.metric[{i}]", n))
                       for i, r in enumerate(rows))
        spray = None
    sampling = data.get("sampling", {})
    _keys(sampling, _SAMPLING, "sampling")
    kw = {}
    if "box_x" in sampling:
        kw["box_x"] = _box(sampling["box_x"], "sampling.box_x", n)
    if "box_y" in sampling:
        kw["box_y"] = _box(sampling["box_y"], "sampling.box_y", n)
    if "y_min" in sampling:
        if not isinstance(sampling["y_min"], (int, float)) or sampling["y_min"] < 0:
            raise SchemaError("sampling.y_min", "expected a non-negative number")
        kw["y_min"] = float(sampling["y_min"])
    if "seed" in sampling:
        if not isinstance(sampling["seed"], int) or sampling["seed"] < 0:
            raise SchemaError("sampling.seed", "expected a non-negative integer")
        kw["seed"] = sampling["seed"]
    if "count" in sampling:
        if not isinstance(sampling["count"], int) or sampling["count"] < 1:
            raise SchemaError("sampling.count", "expected a positive integer")
        kw["count"] = sampling["count"]
    cands = []
    raw = data.get("candidates", [])
    if not isinstance(raw, list):
        raise SchemaError("candidates", "expected a list")
    for i, c in enumerate(raw):
        path = f"candidates[{i}]"
        _keys(c, _CAND, path)
        kind = c.get("kind")
        if kind not in KINDS:
            raise SchemaError(f"{path}.kind", f"expected one of {', '.join(KINDS)}")
        cname = c.get("name", f"c{i}")
        if kind == ONE_FORM:
            if "components" not in c or "expr" in c:
                raise SchemaError(f"{path}.components", "a OneForm needs components (and no expr)")
            payload = tuple(parse_expr(e, n) for e in _strings(c["components"], f"{path}.components", n))
        else:
            if "expr" not in c or "components" in c:
                raise SchemaError(f"{path}.expr", f"a {kind} needs expr (and no components)")
            if not isinstance(c["expr"], str):
                raise SchemaError(f"{path}.expr", "expected a string")
            payload = (parse_expr(c["expr"], n),)
        expected = c.get("expected")
        if expected is not None and (not isinstance(expected, dict)
                                     or not all(isinstance(v, str) for v in expected.values())):
            raise SchemaError(f"{path}.expected", "expected an object of verdict strings")
        cands.append(Candidate(cname, kind, payload, expected))
    if spray is None:
        probe = sample_points(n, 20, kw.get("seed", DEFAULT_SEED), kw.get("box_x"), kw.get("box_y"),
                              kw.get("y_min", DEFAULT_Y_MIN))
        spray = riemannian_spray(metric, probe, name=name)
    return Problem(name, n, spray, tuple(cands), metric=metric, description=source, **kw)


def load_problem(path) -> Problem:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError("", f"invalid JSON: {exc}") from exc
    return problem_from_dict(data, source=str(path))
