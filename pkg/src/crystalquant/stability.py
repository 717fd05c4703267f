"""How close a point configuration is to a regular triangular lattice.

The configuration defect compares the Voronoi quantization error against
the hexagonal optimum; the per-cell analysis classifies cells as hexagons
and measures vertex/edge distances against the regular-hexagon reference
windows. Constants in front of the window width are non-constructive, so
epsilon is caller-supplied and raw counts are reported.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .energy_model import C6, hexagon_reference_distances
from .errors import EmptyInput
from .geometry import ConvexPolygon, area, edge_count, second_moment_about
from .laguerre import LaguerreDiagram, voronoi_diagram

__all__ = ["CellAssessment", "StabilityReport", "analyze", "configuration_defect"]


@dataclass(frozen=True)
class CellAssessment:
    index: int
    is_hexagon: bool
    max_vertex_dev: float
    max_edge_dev: float
    boundary: bool

    def as_dict(self):
        return {
            "index": self.index,
            "is_hexagon": self.is_hexagon,
            "max_vertex_dev": self.max_vertex_dev,
            "max_edge_dev": self.max_edge_dev,
            "boundary": self.boundary,
        }


@dataclass(frozen=True)
class StabilityReport:
    n: int
    volume: float
    eps_hat: float
    cells_total: int
    interior_cells: int
    hexagon_interior: int
    vertex_violations: int
    edge_violations: int
    epsilon_used: float
    per_cell: tuple[CellAssessment, ...]
    diagram: LaguerreDiagram

    def as_dict(self):
        return {
            "schema": "crystalquant/stability-report/v1",
            "n": self.n,
            "volume": self.volume,
            "eps_hat": self.eps_hat,
            "cells_total": self.cells_total,
            "interior_cells": self.interior_cells,
            "hexagon_interior": self.hexagon_interior,
            "vertex_violations": self.vertex_violations,
            "edge_violations": self.edge_violations,
            "epsilon_used": self.epsilon_used,
            "per_cell": [c.as_dict() for c in self.per_cell],
        }


def configuration_defect(points, domain: ConvexPolygon) -> float:
    """(N/|domain|^2) * sum of Voronoi second moments about the sites,
    minus the hexagonal optimum c6. Dilation-invariant."""
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(points) == 0:
        raise EmptyInput("at least one point is required")
    diagram = voronoi_diagram(domain, points)
    total = sum(
        second_moment_about(cell, p) for cell, p in zip(diagram.cells, points)
    )
    dom_area = area(domain)
    return len(points) / dom_area**2 * total - C6


def _segment_distance(p, a, b):
    ab = b - a
    t = float(np.dot(p - a, ab) / np.dot(ab, ab))
    t = min(1.0, max(0.0, t))
    return float(np.linalg.norm(p - (a + t * ab)))


def analyze(points, domain: ConvexPolygon, volume: float, epsilon: float) -> StabilityReport:
    """Classify Voronoi cells against the regular-hexagon reference.

    A cell passes the vertex (edge) test when every site-to-vertex
    (site-to-edge) distance lies within (1 +- epsilon^(1/3)) of the regular
    hexagon of area volume/N. Boundary cells are listed but excluded from
    the violation counts.
    """
    if not epsilon > 0.0:
        raise ValueError("epsilon must be positive")
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(points) == 0:
        raise EmptyInput("at least one point is required")
    diagram = voronoi_diagram(domain, points)
    n = len(points)
    scale = (float(volume) / n) ** 0.5
    circ, inr = hexagon_reference_distances()
    window = epsilon ** (1.0 / 3.0)
    eps_hat = (
        n / area(domain) ** 2
        * sum(second_moment_about(c, p) for c, p in zip(diagram.cells, points))
        - C6
    )

    per_cell = []
    interior = 0
    hex_interior = 0
    v_viol = 0
    e_viol = 0
    for i, cell in enumerate(diagram.cells):
        boundary = diagram.touches_boundary[i]
        verts = cell.vertices
        if len(verts) < 3:
            per_cell.append(CellAssessment(i, False, np.inf, np.inf, boundary))
            continue
        z = points[i]
        vdist = np.linalg.norm(verts - z, axis=1)
        vdev = float(np.max(np.abs(vdist / (scale * circ) - 1.0)))
        edev = 0.0
        for k in range(len(verts)):
            d = _segment_distance(z, verts[k], verts[(k + 1) % len(verts)])
            edev = max(edev, abs(d / (scale * inr) - 1.0))
        is_hex = edge_count(cell) == 6
        per_cell.append(CellAssessment(i, is_hex, vdev, edev, boundary))
        if not boundary:
            interior += 1
            if is_hex:
                hex_interior += 1
            if vdev > window:
                v_viol += 1
            if edev > window:
                e_viol += 1

    return StabilityReport(
        n=n,
        volume=float(volume),
        eps_hat=float(eps_hat),
        cells_total=len(diagram.cells),
        interior_cells=interior,
        hexagon_interior=hex_interior,
        vertex_violations=v_viol,
        edge_violations=e_viol,
        epsilon_used=float(epsilon),
        per_cell=tuple(per_cell),
        diagram=diagram,
    )
