"""Two-dimensional region geometry: hulls, envelopes, Pareto fronts, polyhedra."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "RegionPoint",
    "Polyhedron2D",
    "convex_hull_2d",
    "polygon_area",
    "upper_hull",
    "concave_envelope",
    "pareto_front",
    "rate_region_hull",
    "SLACK",
]

SLACK = 1e-9


@dataclass(frozen=True)
class RegionPoint:
    rates: tuple
    distortions: tuple = ()
    provenance: str = ""

    def __post_init__(self):
        rates = tuple(float(r) for r in self.rates)
        dists = tuple(float(x) for x in self.distortions)
        if any(r < 0 for r in rates):
            raise ValueError(f"rates must be nonnegative, got {rates}")
        if any(x < 0 for x in dists):
            raise ValueError(f"distortions must be nonnegative, got {dists}")
        object.__setattr__(self, "rates", rates)
        object.__setattr__(self, "distortions", dists)


@dataclass(frozen=True)
class Polyhedron2D:
    """``{(R1, R2) >= 0 : a1 R1 + a2 R2 <= b for each half-space}``.

    Half-spaces must admit the origin; regions come from clamped rate bounds,
    so ``b >= 0`` always holds for them.
    """

    halfspaces: tuple = field(default_factory=tuple)

    def __post_init__(self):
        hs = tuple((float(a1), float(a2), float(b)) for a1, a2, b in self.halfspaces)
        for a1, a2, b in hs:
            if not all(np.isfinite((a1, a2, b))):
                raise ValueError("half-space coefficients must be finite")
            if b < -SLACK:
                raise ValueError(f"half-space {a1} R1 + {a2} R2 <= {b} excludes the origin")
        object.__setattr__(self, "halfspaces", hs)

    @classmethod
    def from_bounds(cls, r1=None, r2=None, sums=()) -> "Polyhedron2D":
        """Build from individual and sum-rate bounds, clamping each at zero."""
        hs = []
        if r1 is not None:
            hs.append((1.0, 0.0, max(float(r1), 0.0)))
        if r2 is not None:
            hs.append((0.0, 1.0, max(float(r2), 0.0)))
        for s in sums:
            hs.append((1.0, 1.0, max(float(s), 0.0)))
        return cls(tuple(hs))

    def contains(self, r1: float, r2: float, slack: float = SLACK) -> bool:
        if r1 < -slack or r2 < -slack:
            return False
        return all(a1 * r1 + a2 * r2 <= b + slack for a1, a2, b in self.halfspaces)

    def vertices(self) -> np.ndarray:
        """Counterclockwise vertices; the polygon must be bounded."""
        lines = list(self.halfspaces) + [(-1.0, 0.0, 0.0), (0.0, -1.0, 0.0)]
        pts = []
        for i in range(len(lines)):
            for j in range(i + 1, len(lines)):
                a = np.array([lines[i][:2], lines[j][:2]])
                if abs(np.linalg.det(a)) < 1e-14:
                    continue
                p = np.linalg.solve(a, [lines[i][2], lines[j][2]])
                if self.contains(p[0], p[1], slack=1e-9 * (1 + np.abs(p).max())):
                    pts.append(np.maximum(p, 0.0))
        if not pts:
            return np.zeros((1, 2))
        verts = np.array(pts)
        if np.abs(verts).max() > 1e12:
            raise ValueError("polyhedron is unbounded")
        return convex_hull_2d(verts)


def _as_xy(points) -> np.ndarray:
    if len(points) and isinstance(points[0], RegionPoint):
        return np.array([p.rates[:2] for p in points], dtype=float)
    arr = np.asarray(points, dtype=float)
    return arr.reshape(-1, 2)


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull_2d(points) -> np.ndarray:
    """Monotone-chain hull, counterclockwise from the lowest-leftmost point.

    Collinear points are dropped. Cross products are taken on coordinates
    rescaled to the unit box so that tiny and huge regions behave alike.
    """
    pts = _as_xy(points)
    if len(pts) == 0:
        raise ValueError("convex hull of an empty point set")
    if not np.all(np.isfinite(pts)):
        raise ValueError("points must be finite")
    lo = pts.min(axis=0)
    span = pts.max(axis=0) - lo
    span[span == 0] = 1.0
    scaled = (pts - lo) / span
    order = np.lexsort((scaled[:, 1], scaled[:, 0]))
    uniq = []
    for i in order:
        if not uniq or np.any(np.abs(scaled[i] - scaled[uniq[-1]]) > 1e-15):
            uniq.append(i)
    if len(uniq) <= 2:
        return pts[uniq].copy()
    eps = 1e-12

    def chain(idx):
        out = []
        for i in idx:
            while len(out) >= 2 and _cross(scaled[out[-2]], scaled[out[-1]], scaled[i]) <= eps:
                out.pop()
            out.append(i)
        return out

    lower = chain(uniq)
    upper = chain(uniq[::-1])
    hull = lower[:-1] + upper[:-1]
    return pts[hull].copy()


def polygon_area(vertices) -> float:
    v = np.asarray(vertices, dtype=float)
    if len(v) < 3:
        return 0.0
    x, y = v[:, 0], v[:, 1]
    return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))


def _check_curve(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 1 or x.shape != y.shape:
        raise ValueError("x and y must be 1-D arrays of equal length")
    if len(x) == 0:
        raise ValueError("empty curve")
    if np.any(np.diff(x) <= 0):
        raise ValueError("x must be strictly increasing")
    return x, y


def upper_hull(x, y) -> np.ndarray:
    """Indices of the upper-hull vertices of a curve (left to right)."""
    x, y = _check_curve(x, y)
    ys = y - y.min()
    span = ys.max() or 1.0
    xs = (x - x[0]) / ((x[-1] - x[0]) or 1.0)
    ys = ys / span
    out: list[int] = []
    for i in range(len(x)):
        while len(out) >= 2:
            o, a = out[-2], out[-1]
            cross = (xs[a] - xs[o]) * (ys[i] - ys[o]) - (ys[a] - ys[o]) * (xs[i] - xs[o])
            if cross >= -1e-15:
                out.pop()
            else:
                break
        out.append(i)
    return np.array(out, dtype=int)


def concave_envelope(x, y) -> tuple[np.ndarray, np.ndarray]:
    """Least concave non-decreasing majorant, evaluated on the input grid."""
    x, y = _check_curve(x, y)
    idx = upper_hull(x, y)
    env = np.interp(x, x[idx], y[idx])
    env = np.maximum.accumulate(np.maximum(env, y))
    return x, env


def pareto_front(points, maximize=(), minimize=()) -> np.ndarray:
    """Indices of the non-dominated points (duplicates keep their first copy)."""
    maximize, minimize = tuple(maximize), tuple(minimize)
    if not maximize and not minimize:
        raise ValueError("at least one axis to optimize is required")
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or len(pts) == 0:
        raise ValueError("points must be a nonempty 2-D array")
    axes = maximize + minimize
    if len(set(axes)) != len(axes):
        raise ValueError("maximize and minimize axes overlap")
    # Flip to an all-maximize problem.
    obj = np.concatenate([pts[:, list(maximize)], -pts[:, list(minimize)]], axis=1)
    n = len(obj)
    keep = np.ones(n, dtype=bool)
    chunk = max(1, 4_000_000 // max(n, 1))
    for start in range(0, n, chunk):
        block = obj[start:start + chunk]
        ge = np.all(obj[None, :, :] >= block[:, None, :], axis=2)
        gt = np.any(obj[None, :, :] > block[:, None, :], axis=2)
        keep[start:start + chunk] &= ~np.any(ge & gt, axis=1)
    # Collapse exact duplicates among survivors.
    out, seen = [], set()
    for i in np.flatnonzero(keep):
        key = tuple(obj[i])
        if key not in seen:
            seen.add(key)
            out.append(i)
    return np.array(out, dtype=int)


def rate_region_hull(points) -> np.ndarray:
    """Hull of the down-closure of achievable rate pairs.

    Each point ``(r1, r2)`` also contributes ``(r1, 0)``, ``(0, r2)`` and the
    origin, which is what ``R1, R2 >= 0`` plus time-sharing gives.
    """
    pts = np.maximum(_as_xy(points), 0.0)
    aug = np.concatenate([
        pts,
        np.column_stack([pts[:, 0], np.zeros(len(pts))]),
        np.column_stack([np.zeros(len(pts)), pts[:, 1]]),
        np.zeros((1, 2)),
    ])
    return convex_hull_2d(aug)
