"""Exact 2D convex-polygon primitives.

Clipping, area, centroid, second moments, and regular n-gon construction.
Polygons are counterclockwise and may be empty (a degenerate cell is a
first-class value, not an error). All quantities are closed-form; the only
tolerances are the vertex-cleanup thresholds in :mod:`crystalquant._ring`.
"""

from __future__ import annotations

import math

import numpy as np

from . import _ring
from .errors import DegeneratePolygon, InvalidOrder

__all__ = [
    "ConvexPolygon",
    "HalfPlane",
    "area",
    "centroid",
    "clip_halfplane",
    "contains",
    "contains_many",
    "diameter",
    "edge_count",
    "regular_ngon",
    "scaled",
    "second_moment_about",
    "unit_square",
]


class HalfPlane:
    """Closed half-plane {z : normal . z <= offset}."""

    __slots__ = ("nx", "ny", "offset")

    def __init__(self, normal, offset):
        nx, ny = float(normal[0]), float(normal[1])
        offset = float(offset)
        if not (math.isfinite(nx) and math.isfinite(ny) and math.isfinite(offset)):
            raise ValueError("half-plane coefficients must be finite")
        if nx == 0.0 and ny == 0.0:
            raise ValueError("half-plane normal must be nonzero")
        self.nx = nx
        self.ny = ny
        self.offset = offset

    def __repr__(self):
        return f"HalfPlane(({self.nx}, {self.ny}), {self.offset})"


class ConvexPolygon:
    """Convex polygon with counterclockwise vertices; may be empty."""

    __slots__ = ("vertices",)

    def __init__(self, vertices=(), *, _trusted=False):
        v = np.asarray(vertices, dtype=float)
        if v.size == 0:
            self.vertices = np.empty((0, 2))
            return
        v = v.reshape(-1, 2)
        if _trusted:
            self.vertices = v
            return
        if not np.isfinite(v).all():
            raise ValueError("polygon vertices must be finite")
        xs, ys = v[:, 0].tolist(), v[:, 1].tolist()
        xs, ys, _ = _ring.cleanup_ring(xs, ys, [0] * len(xs))
        if len(xs) < 3:
            self.vertices = np.empty((0, 2))
            return
        v = np.column_stack([xs, ys])
        if _signed_area(v) < 0.0:
            raise ValueError("vertices must wind counterclockwise")
        d = _diameter(v)
        e = np.roll(v, -1, axis=0) - v
        crosses = e[:, 0] * np.roll(e[:, 1], -1) - e[:, 1] * np.roll(e[:, 0], -1)
        if (crosses < -_ring.EPS_GEOM * d * d).any():
            raise ValueError("vertices do not describe a convex polygon")
        self.vertices = v

    @property
    def is_empty(self):
        return len(self.vertices) == 0

    def __len__(self):
        return len(self.vertices)

    def __repr__(self):
        return f"ConvexPolygon({self.vertices.tolist()!r})"


def _signed_area(v):
    x, y = v[:, 0], v[:, 1]
    x2, y2 = np.roll(x, -1), np.roll(y, -1)
    return 0.5 * float(np.sum(x * y2 - x2 * y))


def _diameter(v):
    if len(v) < 2:
        return 0.0
    d = v[:, None, :] - v[None, :, :]
    return math.sqrt(float(np.max(np.einsum("ijk,ijk->ij", d, d))))


def area(poly: ConvexPolygon) -> float:
    """Shoelace area; 0 for empty polygons."""
    v = poly.vertices
    if len(v) < 3:
        return 0.0
    return _signed_area(v)


def centroid(poly: ConvexPolygon):
    """Area centroid. Raises DegeneratePolygon when area is zero."""
    v = poly.vertices
    if len(v) < 3:
        raise DegeneratePolygon("centroid of a polygon with zero area")
    x, y = v[:, 0], v[:, 1]
    x2, y2 = np.roll(x, -1), np.roll(y, -1)
    cr = x * y2 - x2 * y
    a = 0.5 * float(np.sum(cr))
    if a <= 0.0:
        raise DegeneratePolygon("centroid of a polygon with zero area")
    cx = float(np.sum((x + x2) * cr)) / (6.0 * a)
    cy = float(np.sum((y + y2) * cr)) / (6.0 * a)
    return np.array([cx, cy])


def second_moment_about(poly: ConvexPolygon, p) -> float:
    """Integral of |x - p|^2 over the polygon, via a centroid-rooted fan of
    triangles each integrated in closed form. 0 for empty polygons."""
    v = poly.vertices
    if len(v) < 3:
        return 0.0
    px, py = float(p[0]), float(p[1])
    return _ring.ring_moment_about(v[:, 0].tolist(), v[:, 1].tolist(), px, py)


def edge_count(poly: ConvexPolygon) -> int:
    n = len(poly.vertices)
    return n if n >= 3 else 0


def diameter(poly: ConvexPolygon) -> float:
    return _diameter(poly.vertices)


def contains(poly: ConvexPolygon, p, tol: float | None = None) -> bool:
    """Point-in-polygon test, boundary-inclusive up to a small tolerance."""
    v = poly.vertices
    if len(v) < 3:
        return False
    return bool(contains_many(poly, np.asarray(p, dtype=float).reshape(1, 2), tol)[0])


def contains_many(poly: ConvexPolygon, pts, tol: float | None = None):
    """Vectorized contains() for an (N, 2) array of points."""
    v = poly.vertices
    pts = np.asarray(pts, dtype=float).reshape(-1, 2)
    if len(v) < 3:
        return np.zeros(len(pts), dtype=bool)
    if tol is None:
        d = _diameter(v)
        tol = _ring.EPS_GEOM * d * d
    e = np.roll(v, -1, axis=0) - v
    rel = pts[:, None, :] - v[None, :, :]
    cross = e[None, :, 0] * rel[:, :, 1] - e[None, :, 1] * rel[:, :, 0]
    return (cross >= -tol).all(axis=1)


def clip_halfplane(poly: ConvexPolygon, h: HalfPlane) -> ConvexPolygon:
    """Intersection of a convex polygon with a closed half-plane."""
    v = poly.vertices
    if len(v) == 0:
        return ConvexPolygon()
    xs, ys = v[:, 0].tolist(), v[:, 1].tolist()
    labs = [0] * len(xs)
    xs, ys, labs = _ring.clip_ring(xs, ys, labs, h.nx, h.ny, h.offset, 0)
    xs, ys, labs = _ring.cleanup_ring(list(xs), list(ys), list(labs))
    if len(xs) < 3:
        return ConvexPolygon()
    return ConvexPolygon(np.column_stack([xs, ys]), _trusted=True)


def regular_ngon(n: int, area: float, center=(0.0, 0.0)) -> ConvexPolygon:
    """Regular n-gon of the given area, CCW, with one vertex straight up."""
    if not (isinstance(n, (int, np.integer)) and n >= 3):
        raise InvalidOrder(f"regular polygon order must be an integer >= 3, got {n!r}")
    if not (area > 0.0 and math.isfinite(area)):
        raise ValueError("area must be positive and finite")
    r = math.sqrt(2.0 * area / (n * math.sin(2.0 * math.pi / n)))
    cx, cy = float(center[0]), float(center[1])
    ang = math.pi / 2.0 + 2.0 * math.pi * np.arange(n) / n
    v = np.column_stack([cx + r * np.cos(ang), cy + r * np.sin(ang)])
    return ConvexPolygon(v, _trusted=True)


def unit_square() -> ConvexPolygon:
    return ConvexPolygon([(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)], _trusted=True)


def scaled(poly: ConvexPolygon, factor: float) -> ConvexPolygon:
    """Polygon dilated about the origin."""
    if factor <= 0:
        raise ValueError("scale factor must be positive")
    return ConvexPolygon(poly.vertices * float(factor), _trusted=True)
