"""Laguerre (power) diagrams of weighted points clipped to a convex domain.

Cell i is the intersection of the domain with the half-planes
2 (z_j - z_i) . z <= |z_j|^2 - |z_i|^2 + w_i - w_j over all j != i.
Construction clips each cell independently (naive per-cell half-plane
clipping, quadratic in N overall), visiting candidate sites in increasing
distance with a security-radius early exit: once the nearest possible
radical line of any remaining site lies beyond the cell's farthest vertex,
no further site can cut the cell. This prunes without changing the result
and keeps the output deterministic (stable distance-then-index order).

Per-cell areas, centroids and second moments are computed at construction;
the ConvexPolygon cell list is materialized lazily since the solver's inner
loop never needs it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _ring
from .errors import DuplicateSite, EmptyInput
from .geometry import ConvexPolygon, _diameter

__all__ = [
    "LaguerreDiagram",
    "WeightedSite",
    "laguerre_diagram",
    "neighbor_graph",
    "voronoi_diagram",
]

# Shared edges shorter than this fraction of the domain diameter do not
# count as adjacency.
EDGE_LENGTH_REL_TOL = 1e-9
# Minimum site separation, relative to the domain diameter.
MIN_SEPARATION_REL = 1e-9


@dataclass(frozen=True)
class WeightedSite:
    position: tuple[float, float]
    weight: float = 0.0


class LaguerreDiagram:
    """Per-site convex cells partitioning a convex domain, plus adjacency.

    ``cells[i]`` is the (possibly empty) cell of site i; ``owner[i] == i``.
    ``areas``, ``centroids`` and ``cell_moments`` (second moment about the
    cell's own centroid) carry zeros/NaN for empty cells. ``adjacency``
    holds index pairs (i < j) sharing an edge longer than 1e-9 times the
    domain diameter; ``touches_boundary[i]`` marks cells with an edge on
    the domain boundary.
    """

    __slots__ = (
        "domain",
        "owner",
        "adjacency",
        "areas",
        "centroids",
        "cell_moments",
        "touches_boundary",
        "_rings",
        "_cells",
    )

    def __init__(self, domain, rings, owner, adjacency, areas, centroids, cell_moments, touches_boundary):
        self.domain = domain
        self._rings = rings
        self._cells = None
        self.owner = owner
        self.adjacency = adjacency
        self.areas = areas
        self.centroids = centroids
        self.cell_moments = cell_moments
        self.touches_boundary = touches_boundary

    def __len__(self):
        return len(self._rings)

    @property
    def cells(self) -> list[ConvexPolygon]:
        if self._cells is None:
            cells = []
            for xs, ys, labs in self._rings:
                xs, ys, labs = _ring.cleanup_ring(list(xs), list(ys), list(labs))
                if xs:
                    cells.append(ConvexPolygon(np.column_stack([xs, ys]), _trusted=True))
                else:
                    cells.append(ConvexPolygon())
            self._cells = cells
        return self._cells

    @property
    def empty_cells(self):
        return tuple(i for i, a in enumerate(self.areas) if a <= 0.0)

    def __getstate__(self):
        return {k: getattr(self, k) for k in self.__slots__}

    def __setstate__(self, state):
        for k, v in state.items():
            setattr(self, k, v)


def _as_site_arrays(sites):
    pos = []
    wts = []
    for s in sites:
        if isinstance(s, WeightedSite):
            pos.append(s.position)
            wts.append(s.weight)
        else:
            p, w = s
            pos.append(p)
            wts.append(w)
    return np.asarray(pos, dtype=float).reshape(-1, 2), np.asarray(wts, dtype=float)


def laguerre_diagram(domain: ConvexPolygon, sites) -> LaguerreDiagram:
    """Laguerre diagram of weighted sites, clipped to a convex domain.

    ``sites`` is a sequence of WeightedSite (or (position, weight) pairs).
    Sites whose cell clips to empty are kept with an empty polygon.
    """
    positions, weights = _as_site_arrays(sites)
    return _diagram(domain, positions, weights)


def voronoi_diagram(domain: ConvexPolygon, points) -> LaguerreDiagram:
    """Voronoi diagram: Laguerre diagram with all weights zero."""
    positions = np.asarray(points, dtype=float).reshape(-1, 2)
    return _diagram(domain, positions, np.zeros(len(positions)))


def neighbor_graph(diagram: LaguerreDiagram) -> frozenset:
    """Pairs (i, j), i < j, whose cells share a positive-length edge."""
    return diagram.adjacency


def _diagram(domain: ConvexPolygon, positions, weights) -> LaguerreDiagram:
    n = len(positions)
    if n == 0:
        raise EmptyInput("at least one site is required")
    if not (np.isfinite(positions).all() and np.isfinite(weights).all()):
        raise ValueError("site positions and weights must be finite")
    dv = domain.vertices
    if len(dv) < 3:
        raise ValueError("domain must have positive area")
    diam = _diameter(dv)
    len_tol2 = (EDGE_LENGTH_REL_TOL * diam) ** 2

    dom_xs = dv[:, 0].tolist()
    dom_ys = dv[:, 1].tolist()
    dom_labs = [-(k + 1) for k in range(len(dom_xs))]

    px = positions[:, 0]
    py = positions[:, 1]
    if n > 1:
        d2m = (px[:, None] - px[None, :]) ** 2 + (py[:, None] - py[None, :]) ** 2
        off = d2m + np.eye(n)
        if off.min() < (MIN_SEPARATION_REL * diam) ** 2:
            i, j = divmod(int(off.argmin()), n)
            raise DuplicateSite(f"sites {min(i, j)} and {max(i, j)} coincide")
        order = np.argsort(d2m, axis=1, kind="stable").tolist()
        d2l = d2m.tolist()
        w_max = float(weights.max())
    else:
        order = d2l = None
        w_max = 0.0

    sq = px * px + py * py
    pxl = px.tolist()
    pyl = py.tolist()
    wl = weights.tolist()
    sql = sq.tolist()

    clip = _ring.clip_ring
    max_r2 = _ring.ring_max_r2

    rings = []
    adjacency = set()
    touches = []
    areas = np.zeros(n)
    centroids = np.full((n, 2), np.nan)
    moments = np.zeros(n)
    for i in range(n):
        xs, ys, labs = list(dom_xs), list(dom_ys), list(dom_labs)
        xi, yi, wi, qi = pxl[i], pyl[i], wl[i], sql[i]
        r2max = max_r2(xs, ys, xi, yi)
        if n > 1:
            row = d2l[i]
            for j in order[i][1:]:
                dd = row[j]
                # security radius: the radical line of site k at squared
                # distance t >= dd lies at distance >= (t + wi - w_max) /
                # (2 sqrt(t)) from z_i, increasing in t; once that clears
                # the cell's farthest vertex, stop.
                low = dd + wi - w_max
                if low > 0.0 and low * low >= 4.0 * dd * r2max:
                    break
                xs, ys, labs = clip(
                    xs, ys, labs,
                    2.0 * (pxl[j] - xi),
                    2.0 * (pyl[j] - yi),
                    sql[j] - qi + wi - wl[j],
                    j,
                )
                if not xs:
                    break
                r2max = max_r2(xs, ys, xi, yi)
        rings.append((xs, ys, labs))
        if not xs:
            touches.append(False)
            continue
        areas[i] = _ring.ring_area(xs, ys)
        cx, cy = _ring.ring_centroid(xs, ys)
        centroids[i, 0] = cx
        centroids[i, 1] = cy
        moments[i] = _ring.ring_moment_about(xs, ys, cx, cy, centroid=(cx, cy))
        on_boundary = False
        m = len(xs)
        for k in range(m):
            k2 = k + 1 if k + 1 < m else 0
            ex = xs[k2] - xs[k]
            ey = ys[k2] - ys[k]
            if ex * ex + ey * ey <= len_tol2:
                continue
            lab = labs[k]
            if lab >= 0:
                adjacency.add((i, lab) if i < lab else (lab, i))
            else:
                on_boundary = True
        touches.append(on_boundary)

    return LaguerreDiagram(
        domain=domain,
        rings=rings,
        owner=tuple(range(n)),
        adjacency=frozenset(adjacency),
        areas=areas,
        centroids=centroids,
        cell_moments=moments,
        touches_boundary=tuple(touches),
    )
