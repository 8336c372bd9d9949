"""Geometric primitives: variance identities, minimax center, medians, radii.

All functions operate on (n, d) numpy arrays of finite floats. They are pure
and allocate their own outputs, so they are safe to call concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class GeometryError(ValueError):
    """Domain error for geometric operations (empty sets, shape mismatch)."""


def _as_points(points) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.ndim != 2 or pts.shape[0] == 0:
        raise GeometryError("expected a nonempty (n, d) point set")
    if not np.all(np.isfinite(pts)):
        raise GeometryError("point set contains non-finite entries")
    return pts


@dataclass(frozen=True)
class PolicyBox:
    """Axis-aligned box [lo, hi] in R^d; the compact convex policy space."""

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        lo = np.atleast_1d(np.asarray(self.lo, dtype=float))
        hi = np.atleast_1d(np.asarray(self.hi, dtype=float))
        if lo.shape != hi.shape or lo.ndim != 1:
            raise GeometryError("box lo/hi must be 1-d arrays of equal length")
        if np.any(lo > hi):
            raise GeometryError("box requires lo <= hi componentwise")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def dim(self) -> int:
        return self.lo.shape[0]

    @property
    def diameter(self) -> float:
        return float(np.linalg.norm(self.hi - self.lo))

    @property
    def center(self) -> np.ndarray:
        return (self.lo + self.hi) / 2.0

    def contains(self, points, atol: float = 1e-9) -> bool:
        pts = _as_points(points)
        return bool(
            np.all(pts >= self.lo - atol) and np.all(pts <= self.hi + atol)
        )

    def clamp(self, points) -> np.ndarray:
        return np.clip(np.asarray(points, dtype=float), self.lo, self.hi)

    @classmethod
    def unit(cls, dim: int = 2) -> "PolicyBox":
        return cls(np.zeros(dim), np.ones(dim))


@dataclass(frozen=True)
class CenterResult:
    center: np.ndarray
    radius: float


def pairwise_variance(points) -> float:
    """Mean squared deviation from the centroid, (1/n) sum ||x_i - xbar||^2."""
    pts = _as_points(points)
    mean = pts.mean(axis=0)
    return float(np.mean(np.sum((pts - mean) ** 2, axis=1)))


def pairwise_variance_pairs(points) -> float:
    """Same quantity via the pairwise form (1/2n^2) sum_ij ||x_i - x_j||^2.

    Kept as an independent route so the two sides of the identity can be
    cross-checked; do not collapse onto pairwise_variance.
    """
    pts = _as_points(points)
    n = pts.shape[0]
    diffs = pts[:, None, :] - pts[None, :, :]
    total = np.sum(diffs ** 2)
    return float(total / (2.0 * n * n))


def winner_radius(points, w) -> float:
    """Max distance from w to any point: the winner radius R."""
    pts = _as_points(points)
    w = np.atleast_1d(np.asarray(w, dtype=float))
    return float(np.max(np.linalg.norm(pts - w, axis=1)))


def supporter_radius(candidates, centroids) -> float:
    """Max gap between candidate j and its supporter centroid: S."""
    cand = _as_points(candidates)
    cent = _as_points(centroids)
    if cand.shape != cent.shape:
        raise GeometryError("candidates and centroids must have equal shapes")
    return float(np.max(np.linalg.norm(cand - cent, axis=1)))


def coordinatewise_median(points) -> np.ndarray:
    """Per-coordinate median; even counts use the midpoint of the middle two."""
    pts = _as_points(points)
    return np.median(pts, axis=0)


# ---------------------------------------------------------------------------
# Minimax (Chebyshev) center
# ---------------------------------------------------------------------------


def _circle_from(points: np.ndarray) -> CenterResult:
    """Exact ball through <= 3 boundary points in 2D (or <= 2 in any d)."""
    m = points.shape[0]
    if m == 0:
        return CenterResult(np.zeros(2), 0.0)
    if m == 1:
        return CenterResult(points[0].copy(), 0.0)
    if m == 2:
        c = (points[0] + points[1]) / 2.0
        return CenterResult(c, float(np.linalg.norm(points[0] - c)))
    # circumcircle of three 2D points; degenerate -> widest pair
    (ax, ay), (bx, by), (cx, cy) = points[:3]
    d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
    if abs(d) < 1e-14:
        best = None
        for i in range(3):
            for j in range(i + 1, 3):
                c = (points[i] + points[j]) / 2.0
                r = float(np.max(np.linalg.norm(points - c, axis=1)))
                if best is None or r < best.radius:
                    best = CenterResult(c, r)
        return best
    ux = (
        (ax * ax + ay * ay) * (by - cy)
        + (bx * bx + by * by) * (cy - ay)
        + (cx * cx + cy * cy) * (ay - by)
    ) / d
    uy = (
        (ax * ax + ay * ay) * (cx - bx)
        + (bx * bx + by * by) * (ax - cx)
        + (cx * cx + cy * cy) * (bx - ax)
    ) / d
    c = np.array([ux, uy])
    return CenterResult(c, float(np.linalg.norm(points[0] - c)))


def _in_ball(ball: CenterResult, p: np.ndarray, slack: float = 1e-12) -> bool:
    return float(np.linalg.norm(p - ball.center)) <= ball.radius * (1 + 1e-12) + slack


def _welzl_2d(points: np.ndarray) -> CenterResult:
    """Randomized incremental smallest enclosing circle (expected O(n))."""
    rng = np.random.default_rng(1729)  # shuffle only affects runtime, not output
    pts = points[rng.permutation(points.shape[0])]
    ball = CenterResult(pts[0].copy(), 0.0)
    for i in range(1, len(pts)):
        if _in_ball(ball, pts[i]):
            continue
        ball = CenterResult(pts[i].copy(), 0.0)
        for j in range(i):
            if _in_ball(ball, pts[j]):
                continue
            ball = _circle_from(np.array([pts[i], pts[j]]))
            for k in range(j):
                if _in_ball(ball, pts[k]):
                    continue
                ball = _circle_from(np.array([pts[i], pts[j], pts[k]]))
    return ball


def _farthest_point_descent(
    points: np.ndarray, start: np.ndarray, box: PolicyBox, tol: float = 1e-9
) -> CenterResult:
    """Projected pattern search on the (convex) minimax objective."""

    def obj(w):
        return float(np.max(np.linalg.norm(points - w, axis=1)))

    w = box.clamp(start)
    step = max(box.diameter / 4.0, tol)
    best = obj(w)
    d = box.dim
    while step > tol / 4.0:
        improved = False
        for axis in range(d):
            for sign in (1.0, -1.0):
                trial = w.copy()
                trial[axis] += sign * step
                trial = box.clamp(trial)
                val = obj(trial)
                if val < best - 1e-15:
                    w, best = trial, val
                    improved = True
        if not improved:
            step /= 2.0
    return CenterResult(w, best)


def chebyshev_center(points, box: PolicyBox) -> CenterResult:
    """Minimizer of the worst-case distance over the box (1-center).

    For points interior to the box this is the minimum enclosing ball center:
    exact in 1D and 2D, iteratively refined otherwise. Centers falling outside
    the box are re-solved by projected pattern search.
    """
    pts = _as_points(points)
    d = pts.shape[1]
    if d != box.dim:
        raise GeometryError("point dimension does not match box dimension")
    if pts.shape[0] == 1:
        return CenterResult(pts[0].copy(), 0.0)
    if d == 1:
        c = np.array([(pts.min() + pts.max()) / 2.0])
        ball = CenterResult(c, float(pts.max() - c[0]))
    elif d == 2:
        ball = _welzl_2d(pts)
    else:
        ball = _farthest_point_descent(pts, pts.mean(axis=0), box, tol=1e-9)
    if box.contains(ball.center[None, :]):
        center = box.clamp(ball.center)
        return CenterResult(center, float(np.max(np.linalg.norm(pts - center, axis=1))))
    return _farthest_point_descent(pts, ball.center, box, tol=1e-9)
