"""Phase points and seed-deterministic sampling of TM minus the zero section."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

DEFAULT_Y_MIN = 0.1
DEFAULT_SEED = 0xC0FFEE
_MASK = (1 << 64) - 1


class ZeroSectionError(ValueError):
    """The fiber coordinates are too close to the zero section."""


@dataclass(frozen=True)
class PhasePoint:
    """A point (x, y) of TM with |y| >= y_min."""

    x: tuple
    y: tuple
    y_min: float = field(default=DEFAULT_Y_MIN, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(float(v) for v in self.x))
        object.__setattr__(self, "y", tuple(float(v) for v in self.y))
        if len(self.x) != len(self.y):
            raise ValueError("x and y must have the same length")
        norm = float(np.linalg.norm(self.y))
        if norm < self.y_min:
            raise ZeroSectionError(f"|y| = {norm:.3g} below y_min = {self.y_min}")

    @property
    def n(self) -> int:
        return len(self.x)

    def as_dict(self) -> dict:
        return {"x": list(self.x), "y": list(self.y)}


class SplitMix64:
    """splitmix64 generator; identical streams on every platform."""

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def uniform(self, lo: float = 0.0, hi: float = 1.0) -> float:
        u = (self.next_u64() >> 11) * (1.0 / (1 << 53))
        return lo + (hi - lo) * u


class SampleSet:
    """A batch of phase points stored as arrays ``X`` and ``Y`` of shape (m, n)."""

    def __init__(self, X, Y, y_min: float = DEFAULT_Y_MIN, seed=None):
        self.X = np.atleast_2d(np.asarray(X, dtype=float))
        self.Y = np.atleast_2d(np.asarray(Y, dtype=float))
        if self.X.shape != self.Y.shape:
            raise ValueError("X and Y shapes differ")
        self.y_min = y_min
        self.seed = seed  # provenance only

    @classmethod
    def from_points(cls, points: Sequence[PhasePoint]) -> "SampleSet":
        return cls([p.x for p in points], [p.y for p in points],
                   y_min=min((p.y_min for p in points), default=DEFAULT_Y_MIN))

    @property
    def m(self) -> int:
        return self.X.shape[0]

    @property
    def n(self) -> int:
        return self.X.shape[1]

    def __len__(self):
        return self.m

    def point(self, i: int) -> PhasePoint:
        return PhasePoint(self.X[i], self.Y[i], y_min=0.0)

    @property
    def points(self) -> list:
        return [self.point(i) for i in range(self.m)]

    def scale_fiber(self, factor: float) -> "SampleSet":
        return SampleSet(self.X, self.Y * factor, y_min=self.y_min * abs(factor), seed=self.seed)

    def subset(self, idx) -> "SampleSet":
        return SampleSet(self.X[idx], self.Y[idx], y_min=self.y_min, seed=self.seed)


def default_box(n: int):
    return [(-1.0, 1.0)] * n


def sample_points(n: int, count: int = 20, seed: int = DEFAULT_SEED, box_x=None, box_y=None,
                  y_min: float = DEFAULT_Y_MIN, max_tries: int = 10000) -> SampleSet:
    """Draw ``count`` points uniformly from the boxes, rejecting |y| < y_min.

    Per point: n x-coordinates, then n y-coordinates redrawn until the
    fiber norm clears ``y_min``.
    """
    box_x = default_box(n) if box_x is None else [tuple(b) for b in box_x]
    box_y = default_box(n) if box_y is None else [tuple(b) for b in box_y]
    if len(box_x) != n or len(box_y) != n:
        raise ValueError(f"sampling boxes must have {n} intervals")
    rng = SplitMix64(seed)
    X = np.empty((count, n))
    Y = np.empty((count, n))
    for k in range(count):
        X[k] = [rng.uniform(lo, hi) for lo, hi in box_x]
        for _ in range(max_tries):
            Y[k] = [rng.uniform(lo, hi) for lo, hi in box_y]
            if np.linalg.norm(Y[k]) >= y_min:
                break
        else:
            raise ValueError("fiber box lies inside the excluded zero-section ball")
    return SampleSet(X, Y, y_min=y_min, seed=seed)
