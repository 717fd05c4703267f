"""Low-level vertex-ring operations shared by the polygon type and the
diagram builder.

A ring is a counterclockwise list of vertices stored as plain Python float
lists ``xs, ys`` (fast in the clipping inner loop, where numpy per-call
overhead dominates for <= ~16 vertices). ``labs[k]`` tags the supporting
line of edge k, which runs from vertex k to vertex k+1 (mod n); the diagram
builder uses site indices >= 0 and negative tags for domain edges.
"""

from __future__ import annotations

import math

# Vertex-cleanup tolerances, relative to the ring diameter (dedup) and its
# square (collinearity). Chosen so edge counts stay meaningful for hexagon
# classification without moving areas beyond 1e-12.
EPS_GEOM = 1e-12
EPS_DEDUP = 1e-12


def clip_ring(xs, ys, labs, nx, ny, off, new_lab):
    """Intersect a CCW ring with the half-plane {z : nx*x + ny*y <= off}.

    Returns the (possibly unchanged, possibly empty) clipped ring. The new
    edge created on the clip line is tagged ``new_lab``.
    """
    n = len(xs)
    s = [nx * xs[i] + ny * ys[i] - off for i in range(n)]
    inside = [v <= 0.0 for v in s]
    if all(inside):
        return xs, ys, labs
    if not any(inside):
        return [], [], []
    oxs: list[float] = []
    oys: list[float] = []
    olabs: list[int] = []
    for k in range(n):
        k2 = k + 1 if k + 1 < n else 0
        if inside[k]:
            oxs.append(xs[k])
            oys.append(ys[k])
            olabs.append(labs[k])
            if not inside[k2]:
                t = s[k] / (s[k] - s[k2])
                oxs.append(xs[k] + t * (xs[k2] - xs[k]))
                oys.append(ys[k] + t * (ys[k2] - ys[k]))
                olabs.append(new_lab)
        elif inside[k2]:
            t = s[k] / (s[k] - s[k2])
            oxs.append(xs[k] + t * (xs[k2] - xs[k]))
            oys.append(ys[k] + t * (ys[k2] - ys[k]))
            olabs.append(labs[k])
    return oxs, oys, olabs


def ring_extent(xs, ys):
    """Bounding-box diagonal; an upper bound for the diameter, used only to
    scale cleanup tolerances."""
    if not xs:
        return 0.0
    dx = max(xs) - min(xs)
    dy = max(ys) - min(ys)
    return math.hypot(dx, dy)


def cleanup_ring(xs, ys, labs):
    """Remove duplicate and collinear vertices, keeping edge labels coherent.

    Dropping the first vertex of a near-duplicate pair keeps the outgoing
    label of the survivor; dropping the middle vertex of a collinear triple
    merges two edges that lie on the same supporting line.
    """
    scale = ring_extent(xs, ys)
    eps_d = EPS_DEDUP * scale
    eps_g = EPS_GEOM * scale * scale
    changed = True
    while changed and len(xs) >= 3:
        changed = False
        n = len(xs)
        # duplicate pass: drop index k when vertex k+1 is within eps_d
        for k in range(n):
            k2 = k + 1 if k + 1 < n else 0
            if math.hypot(xs[k2] - xs[k], ys[k2] - ys[k]) <= eps_d:
                del xs[k], ys[k], labs[k]
                changed = True
                break
        if changed:
            continue
        # collinear pass: drop vertex k when the turn at k is degenerate
        for k in range(n):
            km = k - 1
            k2 = k + 1 if k + 1 < n else 0
            ax = xs[k] - xs[km]
            ay = ys[k] - ys[km]
            bx = xs[k2] - xs[k]
            by = ys[k2] - ys[k]
            if abs(ax * by - ay * bx) <= eps_g:
                del xs[k], ys[k], labs[k]
                changed = True
                break
    if len(xs) < 3:
        return [], [], []
    return xs, ys, labs


def ring_area(xs, ys):
    n = len(xs)
    if n < 3:
        return 0.0
    acc = 0.0
    for k in range(n):
        k2 = k + 1 if k + 1 < n else 0
        acc += xs[k] * ys[k2] - xs[k2] * ys[k]
    return 0.5 * acc


def ring_centroid(xs, ys):
    n = len(xs)
    ax = ay = acc = 0.0
    for k in range(n):
        k2 = k + 1 if k + 1 < n else 0
        cr = xs[k] * ys[k2] - xs[k2] * ys[k]
        acc += cr
        ax += (xs[k] + xs[k2]) * cr
        ay += (ys[k] + ys[k2]) * cr
    area = 0.5 * acc
    if area == 0.0:
        raise ZeroDivisionError("degenerate ring")
    return ax / (6.0 * area), ay / (6.0 * area)


def ring_moment_about(xs, ys, px, py, centroid=None):
    """Integral of |x - p|^2 over the ring interior.

    Triangulates by a fan rooted at the centroid (sign-uniform triangles for
    convex CCW rings) and integrates each triangle in closed form.
    """
    n = len(xs)
    if n < 3:
        return 0.0
    cx, cy = ring_centroid(xs, ys) if centroid is None else centroid
    rcx = cx - px
    rcy = cy - py
    rc2 = rcx * rcx + rcy * rcy
    acc = 0.0
    for k in range(n):
        k2 = k + 1 if k + 1 < n else 0
        ax = xs[k] - px
        ay = ys[k] - py
        bx = xs[k2] - px
        by = ys[k2] - py
        # twice the signed triangle area (centroid, vk, vk+1)
        tt = (ax - rcx) * (by - rcy) - (ay - rcy) * (bx - rcx)
        quad = (
            rc2
            + ax * ax + ay * ay
            + bx * bx + by * by
            + rcx * ax + rcy * ay
            + ax * bx + ay * by
            + bx * rcx + by * rcy
        )
        acc += tt * quad
    return acc / 12.0


def ring_max_r2(xs, ys, x0, y0):
    best = 0.0
    for x, y in zip(xs, ys):
        d = (x - x0) * (x - x0) + (y - y0) * (y - y0)
        if d > best:
            best = d
    return best
