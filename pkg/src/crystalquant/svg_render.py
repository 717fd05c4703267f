"""SVG rendering of diagrams: cells colored by side count, sites as dots.

Pure presentation; nothing here feeds back into any computed number.
"""

from __future__ import annotations

import numpy as np

from .geometry import edge_count

__all__ = ["render_diagram"]

# side count -> fill (squares yellow, pentagons orange, hexagons blue,
# heptagons red; everything else grey)
FILL_BY_SIDES = {
    4: "#f2c94c",
    5: "#f2994a",
    6: "#5b8def",
    7: "#eb5757",
}
DEFAULT_FILL = "#d0d0d0"


def render_diagram(diagram, positions=None, highlight=None, width=720) -> str:
    """SVG document for a diagram; optional site dots and a set of cell
    indices to outline as highlighted."""
    dom = diagram.domain.vertices
    xmin, ymin = dom.min(axis=0)
    xmax, ymax = dom.max(axis=0)
    span = max(xmax - xmin, ymax - ymin)
    margin = 0.02 * span
    sx = (width - 2.0) / (span + 2 * margin)
    height = int((ymax - ymin + 2 * margin) * sx) + 2

    def tx(p):
        return (
            1.0 + (p[0] - xmin + margin) * sx,
            height - 1.0 - (p[1] - ymin + margin) * sx,
        )

    highlight = set() if highlight is None else set(highlight)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    stroke_w = max(0.6, 0.002 * width)
    for i, cell in enumerate(diagram.cells):
        v = cell.vertices
        if len(v) < 3:
            continue
        pts = " ".join(f"{x:.2f},{y:.2f}" for x, y in (tx(p) for p in v))
        fill = FILL_BY_SIDES.get(edge_count(cell), DEFAULT_FILL)
        stroke = "#222222" if i in highlight else "white"
        sw = stroke_w * (2.5 if i in highlight else 1.0)
        parts.append(
            f'<polygon points="{pts}" fill="{fill}" stroke="{stroke}" stroke-width="{sw:.2f}"/>'
        )
    if positions is not None:
        positions = np.asarray(positions, dtype=float).reshape(-1, 2)
        r = max(1.0, 0.0035 * width)
        for p in positions:
            x, y = tx(p)
            parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="{r:.2f}" fill="black"/>')
    parts.append("</svg>")
    return "\n".join(parts)
