"""
Data-point sets on rectangles.

Random sets use numpy's ``PCG64`` bit generator (via ``default_rng``), which
is pinned by numpy's stream-compatibility policy for a given seed.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.spatial import cKDTree


@dataclass(frozen=True)
class Rectangle:
    """Axis-aligned box ``[lo_0, hi_0] x ... `` in one or two dimensions."""

    lo: tuple
    hi: tuple

    def __post_init__(self):
        lo = tuple(float(v) for v in np.atleast_1d(self.lo))
        hi = tuple(float(v) for v in np.atleast_1d(self.hi))
        if len(lo) != len(hi) or len(lo) not in (1, 2):
            raise ValueError("rectangle must be 1-D or 2-D with matching bounds")
        if any(a >= b for a, b in zip(lo, hi)):
            raise ValueError("rectangle needs lo < hi componentwise")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def unit(cls, dim: int = 1) -> "Rectangle":
        return cls((0.0,) * dim, (1.0,) * dim)

    @classmethod
    def parse(cls, text: str) -> "Rectangle":
        """Parse ``"a,b"`` or ``"a,b,c,d"``."""
        vals = [float(v) for v in text.split(",")]
        if len(vals) == 2:
            return cls((vals[0],), (vals[1],))
        if len(vals) == 4:
            return cls((vals[0], vals[2]), (vals[1], vals[3]))
        raise ValueError(f"domain must have 2 or 4 numbers, got {text!r}")

    @property
    def dim(self) -> int:
        return len(self.lo)

    @property
    def volume(self) -> float:
        return float(np.prod(np.subtract(self.hi, self.lo)))

    def contains(self, pts) -> np.ndarray:
        pts = np.asarray(pts, dtype=float).reshape(-1, self.dim)
        return np.all((pts >= self.lo) & (pts <= self.hi), axis=1)

    def to_list(self) -> list:
        return [v for pair in zip(self.lo, self.hi) for v in pair]


@dataclass(frozen=True, eq=False)
class PointSet:
    """Ordered, pairwise distinct points inside a rectangle.

    ``points`` always has shape ``(N, dim)``.
    """

    points: np.ndarray
    rect: Rectangle
    recipe: str = "custom"
    seed: int | None = None

    def __post_init__(self):
        pts = np.array(self.points, dtype=float).reshape(-1, self.rect.dim)
        if len(pts) == 0:
            raise ValueError("point set is empty")
        if not np.all(np.isfinite(pts)):
            raise ValueError("points must be finite")
        if not np.all(self.rect.contains(pts)):
            raise ValueError("points must lie in the closed rectangle")
        if len(pts) > 1 and len(cKDTree(pts).query_pairs(0.0)) > 0:
            raise ValueError("points must be pairwise distinct")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return len(self.points)

    @property
    def dim(self) -> int:
        return self.rect.dim

    def to_csv(self, path) -> None:
        header = ["x", "y"][: self.dim]
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(header)
            w.writerows([[repr(float(v)) for v in p] for p in self.points])

    @classmethod
    def from_csv(cls, path, rect: Rectangle) -> "PointSet":
        with open(Path(path), newline="") as fh:
            rows = list(csv.reader(fh))
        if not rows or [c.strip() for c in rows[0]] != ["x", "y"][: rect.dim]:
            raise ValueError("point CSV must start with header 'x' or 'x,y'")
        return cls(np.array(rows[1:], dtype=float), rect, recipe="csv")


def equidistant(rect: Rectangle, n_per_axis: int) -> PointSet:
    """Tensor grid with ``n_per_axis`` points per axis, boundary included."""
    if n_per_axis < 2:
        raise ValueError("need at least 2 points per axis")
    axes = [np.linspace(a, b, n_per_axis) for a, b in zip(rect.lo, rect.hi)]
    if rect.dim == 1:
        pts = axes[0][:, None]
    else:
        X, Y = np.meshgrid(axes[0], axes[1], indexing="ij")
        pts = np.column_stack([X.ravel(), Y.ravel()])
    return PointSet(pts, rect, recipe="equidistant")


def radical_inverse(i, base: int) -> np.ndarray:
    """Van der Corput radical inverse of the integers ``i`` in ``base``."""
    i = np.array(i, dtype=np.int64)
    out = np.zeros(i.shape)
    f = 1.0 / base
    while np.any(i > 0):
        out += f * (i % base)
        i //= base
        f /= base
    return out


def halton(rect: Rectangle, n: int) -> PointSet:
    """First ``n`` Halton points (bases 2 and 3), starting at index 1."""
    if n < 1:
        raise ValueError("n must be positive")
    idx = np.arange(1, n + 1)
    unit = np.column_stack([radical_inverse(idx, b) for b in (2, 3)[: rect.dim]])
    lo, hi = np.array(rect.lo), np.array(rect.hi)
    return PointSet(lo + unit * (hi - lo), rect, recipe="halton")


def random_uniform(rect: Rectangle, n: int, seed: int = 0) -> PointSet:
    """``n`` i.i.d. uniform points; exact duplicates are redrawn."""
    if n < 1:
        raise ValueError("n must be positive")
    rng = np.random.default_rng(seed)
    lo, hi = np.array(rect.lo), np.array(rect.hi)
    pts = lo + rng.random((n, rect.dim)) * (hi - lo)
    while True:
        _, first = np.unique(pts, axis=0, return_index=True)
        if len(first) == n:
            break
        dup = np.setdiff1d(np.arange(n), first)
        pts[dup] = lo + rng.random((len(dup), rect.dim)) * (hi - lo)
    return PointSet(pts, rect, recipe="random", seed=seed)


def make_pointset(recipe: str, rect: Rectangle, n: int, seed: int = 0) -> PointSet:
    """Dispatch on a CLI token. For ``equidistant``, ``n`` is the total count
    and must be a perfect power of the dimension (e.g. 400 = 20**2)."""
    recipe = recipe.lower()
    if recipe == "equidistant":
        per_axis = round(n ** (1.0 / rect.dim))
        if per_axis ** rect.dim != n:
            raise ValueError(f"equidistant N={n} is not a perfect {rect.dim}-th power")
        return equidistant(rect, per_axis)
    if recipe == "halton":
        return halton(rect, n)
    if recipe == "random":
        return random_uniform(rect, n, seed)
    raise ValueError(f"unknown point recipe {recipe!r}")


def separation(ps: PointSet) -> np.ndarray:
    """Distance from each point to its nearest neighbour."""
    if len(ps) < 2:
        raise ValueError("separation needs at least two points")
    d, _ = cKDTree(ps.points).query(ps.points, k=2)
    return d[:, 1]


def unisolvency_check(ps: PointSet, d: int) -> bool:
    """True iff polynomials of degree <= d are determined by values on ``ps``."""
    from .polybasis import MonomialBasis

    if d < 0:
        return True
    basis = MonomialBasis(d, ps.dim)
    if len(ps) < basis.K:
        return False
    P = basis(ps.points)
    s = np.linalg.svd(P, compute_uv=False)
    tol = len(ps) * np.finfo(float).eps * s[0]
    return bool(s[-1] > tol)
