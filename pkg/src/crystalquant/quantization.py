"""Energies, rescalings, defects, optimal weights, and merging deltas.

Two frames are supported. In the physical frame the domain has unit area,
masses sum to 1, and the entropy coefficient is delta. In the rescaled
frame the domain is blown up so optimal cell areas tend to 1, masses sum to
the domain area, and the entropy coefficient is c6/(1-alpha).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .energy_model import C6, c_n
from .errors import DomainError, EmptyCellWarning, PartitionGapError
from .geometry import ConvexPolygon, area, centroid, contains_many, second_moment_about
from .laguerre import LaguerreDiagram, _diagram

__all__ = [
    "Configuration",
    "EnergyBreakdown",
    "Frame",
    "config_energy",
    "constrained_ratio",
    "defect",
    "heuristic_delta",
    "merge_delta",
    "optimal_weights",
    "partition_energy",
    "rescale_volume",
    "rescaled_ratio",
]

# Coefficients blow up as alpha -> 1; refuse the last sliver.
ALPHA_CAP = 1.0 - 1e-6

MASS_SUM_REL_TOL = 1e-8
PARTITION_REL_TOL = 1e-9


def _check_alpha(alpha):
    alpha = float(alpha)
    if not alpha < ALPHA_CAP:
        raise DomainError(f"entropy exponent must be < {ALPHA_CAP}, got {alpha}")
    return alpha


def ratio_reference(alpha) -> float:
    """Asymptotic rescaled energy per unit volume, (2-alpha)/(1-alpha) c6."""
    alpha = _check_alpha(alpha)
    return (2.0 - alpha) / (1.0 - alpha) * C6


@dataclass(frozen=True)
class Frame:
    """Energy frame: 'physical' (entropy coefficient delta) or 'rescaled'
    (entropy coefficient c6/(1-alpha))."""

    kind: str
    alpha: float
    delta: float | None = None

    def __post_init__(self):
        if self.kind not in ("physical", "rescaled"):
            raise ValueError(f"unknown frame kind {self.kind!r}")
        _check_alpha(self.alpha)
        if self.kind == "physical":
            if self.delta is None or not self.delta > 0.0:
                raise ValueError("physical frame requires delta > 0")
        elif self.delta is not None:
            raise ValueError("rescaled frame takes no delta")

    @classmethod
    def physical(cls, alpha, delta):
        return cls("physical", float(alpha), float(delta))

    @classmethod
    def rescaled(cls, alpha):
        return cls("rescaled", float(alpha))

    @property
    def entropy_coefficient(self) -> float:
        if self.kind == "physical":
            return self.delta
        return C6 / (1.0 - self.alpha)


@dataclass(frozen=True)
class EnergyBreakdown:
    transport: float
    entropy: float
    total: float
    rescaled_ratio: float
    defect: float


@dataclass
class Configuration:
    """Particle positions and masses in a domain, in a given frame."""

    domain: ConvexPolygon
    positions: np.ndarray
    masses: np.ndarray
    frame: Frame
    _validated: bool = field(default=False, repr=False)

    def __post_init__(self):
        self.positions = np.asarray(self.positions, dtype=float).reshape(-1, 2)
        self.masses = np.asarray(self.masses, dtype=float).reshape(-1)
        if self._validated:
            return
        if len(self.positions) != len(self.masses):
            raise ValueError("positions and masses disagree in length")
        if len(self.masses) == 0:
            raise ValueError("configuration needs at least one particle")
        if not (self.masses > 0.0).all():
            raise ValueError("masses must be positive")
        target = 1.0 if self.frame.kind == "physical" else area(self.domain)
        total = float(self.masses.sum())
        if abs(total - target) > MASS_SUM_REL_TOL * max(target, 1.0):
            raise ValueError(f"masses sum to {total}, expected {target}")
        if not contains_many(self.domain, self.positions).all():
            raise ValueError("all positions must lie inside the domain")

    @property
    def n(self) -> int:
        return len(self.masses)


def rescale_volume(alpha, delta) -> float:
    """Blow-up volume (c6 / (delta (1-alpha)))^(1/(2-alpha))."""
    alpha = _check_alpha(alpha)
    delta = float(delta)
    if not delta > 0.0:
        raise DomainError("delta must be positive")
    return (C6 / (delta * (1.0 - alpha))) ** (1.0 / (2.0 - alpha))


def heuristic_delta(alpha, n, domain_area=1.0) -> float:
    """Penalty delta whose optimal particle count is approximately n."""
    alpha = _check_alpha(alpha)
    n = float(n)
    if not n > 0.0:
        raise DomainError("target particle count must be positive")
    return C6 * float(domain_area) / ((1.0 - alpha) * n ** (2.0 - alpha))


def optimal_weights(masses, frame: Frame):
    """First-order optimal Laguerre weights, -coef * alpha * m^(alpha-1)."""
    masses = np.asarray(masses, dtype=float)
    if not (masses > 0.0).all():
        raise DomainError("masses must be positive")
    alpha = frame.alpha
    return -frame.entropy_coefficient * alpha * masses ** (alpha - 1.0)


def _energy_from_stats(areas, moments, frame: Frame) -> EnergyBreakdown:
    """Assemble the breakdown from per-cell areas and centroid moments."""
    areas = np.asarray(areas, dtype=float)
    moments = np.asarray(moments, dtype=float)
    live = areas > 0.0
    transport = float(moments[live].sum())
    entropy = frame.entropy_coefficient * float((areas[live] ** frame.alpha).sum())
    total = transport + entropy
    ref = ratio_reference(frame.alpha)
    if frame.kind == "physical":
        v = rescale_volume(frame.alpha, frame.delta)
        ratio = v * total / ref
    else:
        measure = float(areas[live].sum())
        ratio = total / measure / ref
    return EnergyBreakdown(
        transport=transport,
        entropy=entropy,
        total=total,
        rescaled_ratio=ratio,
        defect=(ratio - 1.0) * ref,
    )


def partition_energy(cells, frame: Frame, domain_area=None) -> EnergyBreakdown:
    """Energy of a partition: sum of centroid second moments plus the
    entropy of the cell areas. Empty cells are skipped.

    When domain_area is given, the cell areas must sum to it within 1e-9
    relative (PartitionGapError otherwise); otherwise the cells are treated
    as a partition of their union.
    """
    areas = np.array([area(c) for c in cells])
    if domain_area is not None:
        gap = abs(float(areas.sum()) - float(domain_area))
        if gap > PARTITION_REL_TOL * max(float(domain_area), 1.0):
            raise PartitionGapError(
                f"cell areas sum to {float(areas.sum())}, domain has {float(domain_area)}"
            )
    moments = np.array(
        [second_moment_about(c, centroid(c)) if a > 0.0 else 0.0 for c, a in zip(cells, areas)]
    )
    return _energy_from_stats(areas, moments, frame)


def config_energy(cfg: Configuration) -> tuple[EnergyBreakdown, LaguerreDiagram]:
    """Energy of a configuration through its Laguerre diagram.

    Builds first-order optimal weights from the masses, tessellates, and
    evaluates the partition energy of the cells (which replaces masses by
    cell areas; at the solver's fixed point the two coincide). Sites whose
    cell comes out empty raise EmptyCellWarning but do not fail.
    """
    weights = optimal_weights(cfg.masses, cfg.frame)
    diagram = _diagram(cfg.domain, cfg.positions, weights)
    empties = diagram.empty_cells
    if empties:
        warnings.warn(f"{len(empties)} site(s) received an empty cell", EmptyCellWarning, stacklevel=2)
    breakdown = _energy_from_stats(diagram.areas, diagram.cell_moments, cfg.frame)
    dom_area = area(cfg.domain)
    gap = abs(float(diagram.areas.sum()) - dom_area)
    if gap > PARTITION_REL_TOL * max(dom_area, 1.0):
        raise PartitionGapError(f"diagram cells leak area {gap}")
    return breakdown, diagram


def merge_delta(m1, m2, z1, z2, frame: Frame) -> float:
    """Energy change from merging two cells with masses m1, m2 at centroids
    z1, z2: coef ((m1+m2)^a - m1^a - m2^a) + |z2-z1|^2 m1 m2 / (m1+m2)."""
    m1 = float(m1)
    m2 = float(m2)
    if not (m1 > 0.0 and m2 > 0.0):
        raise DomainError("masses must be positive")
    a = frame.alpha
    coef = frame.entropy_coefficient
    z1 = np.asarray(z1, dtype=float)
    z2 = np.asarray(z2, dtype=float)
    d2 = float(((z2 - z1) ** 2).sum())
    return coef * ((m1 + m2) ** a - m1**a - m2**a) + d2 * m1 * m2 / (m1 + m2)


def defect(alpha, delta, physical_total_energy) -> float:
    """Rescaled gap V * E - (2-alpha)/(1-alpha) c6 of a physical energy."""
    v = rescale_volume(alpha, delta)
    return v * float(physical_total_energy) - ratio_reference(alpha)


def rescaled_ratio(alpha, delta, physical_total_energy) -> float:
    """Rescaled physical energy over its asymptotic value; tends to 1."""
    v = rescale_volume(alpha, delta)
    return v * float(physical_total_energy) / ratio_reference(alpha)


def constrained_ratio(alpha, cells) -> float:
    """Constrained-problem ratio L^(1/(1-alpha)) * transport with
    L = sum of |C_i|^alpha, for cells partitioning a unit-area domain."""
    alpha = _check_alpha(alpha)
    areas = np.array([area(c) for c in cells])
    live = areas > 0.0
    total_area = float(areas[live].sum())
    if abs(total_area - 1.0) > 1e-6:
        raise PartitionGapError(f"cells must partition a unit-area domain, got {total_area}")
    ell = float((areas[live] ** alpha).sum())
    transport = sum(
        second_moment_about(c, centroid(c)) for c, a in zip(cells, areas) if a > 0.0
    )
    return ell ** (1.0 / (1.0 - alpha)) * transport
