import math

import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_convex_ngon(rng, n, scale=1.0, center=(0.0, 0.0)):
    """Random polygon with exactly n vertices in convex position: points on
    a circle pushed through a random positive-definite map."""
    while True:
        ang = np.sort(rng.uniform(0.0, 2.0 * math.pi, size=n))
        if np.min(np.diff(ang)) > 1e-2 and (2.0 * math.pi - ang[-1] + ang[0]) > 1e-2:
            break
    pts = np.column_stack([np.cos(ang), np.sin(ang)])
    a = rng.normal(0.0, 1.0, size=(2, 2))
    m = a @ a.T + 0.25 * np.eye(2)
    pts = pts @ m * scale + np.asarray(center, dtype=float)
    return _ccw(pts)


def _ccw(pts):
    x, y = pts[:, 0], pts[:, 1]
    if 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)) < 0.0:
        return pts[::-1].copy()
    return pts


def triangular_lattice(k, include_boundary=False):
    """Exact triangular lattice of unit-area cells on the commensurate
    rectangle [0, k*a] x [0, k*h]; returns (points, rectangle vertices).

    With include_boundary the outermost rows/columns sit exactly on the
    rectangle edges; otherwise points are offset half a step inward.
    """
    a = math.sqrt(2.0 / math.sqrt(3.0))
    h = a * math.sqrt(3.0) / 2.0
    pts = []
    if include_boundary:
        for j in range(k + 1):
            y = j * h
            if j % 2 == 0:
                xs = [i * a for i in range(k + 1)]
            else:
                xs = [(i + 0.5) * a for i in range(k)]
            pts.extend((x, y) for x in xs)
    else:
        for j in range(k):
            y = (j + 0.25) * h
            off = 0.25 if j % 2 == 0 else 0.75
            xs = [(i + off) * a for i in range(k)]
            pts.extend((x, y) for x in xs)
    rect = [(0.0, 0.0), (k * a, 0.0), (k * a, k * h), (0.0, k * h)]
    return np.asarray(pts), rect
