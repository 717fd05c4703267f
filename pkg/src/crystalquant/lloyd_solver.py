"""Generalized Lloyd iteration for the rescaled penalized energy.

One step: weights from masses, Laguerre diagram, masses <- cell areas,
positions <- cell centroids. Particles whose cell clips to empty are
removed (silently, but counted). A step is accepted only if the partition
energy does not increase beyond a 1e-12 relative tolerance; otherwise the
step is damped (new = theta*proposed + (1-theta)*old) with theta halved
until acceptance or theta < 1e-3. Optional particle-count adaptation
merges adjacent cells with negative merging delta and trials a split of
the largest cell, keeping changes only when the relaxed energy does not
regress.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .energy_model import C6
from .errors import EmptyInput, InternalError
from .geometry import ConvexPolygon, area, centroid, contains_many, scaled
from .laguerre import LaguerreDiagram, _diagram
from .quantization import (
    Configuration,
    EnergyBreakdown,
    Frame,
    _energy_from_stats,
    merge_delta,
    optimal_weights,
    rescale_volume,
)

__all__ = [
    "LatticePerturbed",
    "RandomUniform",
    "SolveResult",
    "SolverConfig",
    "adapt_particle_count",
    "init_configuration",
    "interior_mass_violations",
    "lloyd_step",
    "multistart",
    "solve",
]

ACCEPT_REL_TOL = 1e-12
THETA_MIN = 1e-3
RELAX_STEPS = 5
MAX_ADAPT_ROUNDS = 50
# Interior cells of minimizers have at least this area (rescaled units);
# used only for the soft post-convergence check.
MASS_FLOOR_INTERIOR = 2.0620e-4
# Triangular lattice with unit-area Voronoi cells: spacing and row height.
LATTICE_SPACING = math.sqrt(2.0 / math.sqrt(3.0))
LATTICE_ROW_H = LATTICE_SPACING * math.sqrt(3.0) / 2.0

THREADS_ENV = "CRYSTALQUANT_THREADS"


@dataclass(frozen=True)
class RandomUniform:
    """Draw n i.i.d. uniform points in the domain."""

    n: int


@dataclass(frozen=True)
class LatticePerturbed:
    """Triangular lattice of unit-area cells, each point jittered by a
    centered Gaussian of the given standard deviation."""

    sigma: float = 0.0


@dataclass(frozen=True)
class SolverConfig:
    alpha: float
    delta: float
    init: RandomUniform | LatticePerturbed
    max_iters: int = 5000
    tol_pos: float | None = None
    tol_mass: float | None = None
    multistart: int = 1
    seed: int = 0
    adapt: bool = True

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.multistart < 1:
            raise ValueError("multistart must be >= 1")
        if self.tol_pos is not None and not self.tol_pos > 0.0:
            raise ValueError("tol_pos must be positive")
        if self.tol_mass is not None and not self.tol_mass > 0.0:
            raise ValueError("tol_mass must be positive")


@dataclass
class SolveResult:
    final: Configuration
    diagram: LaguerreDiagram
    energy: EnergyBreakdown
    trace: list[float]
    iterations: int
    converged: bool
    removed_particles: int
    adaptation_events: int
    volume: float
    seed: int


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=int(seed) % 2**64))


def _uniform_in_polygon(rng, domain: ConvexPolygon, n: int):
    """Uniform points via the centroid-rooted triangle fan."""
    v = domain.vertices
    c = centroid(domain)
    a = v
    b = np.roll(v, -1, axis=0)
    tri_area = 0.5 * ((a[:, 0] - c[0]) * (b[:, 1] - c[1]) - (a[:, 1] - c[1]) * (b[:, 0] - c[0]))
    cum = np.cumsum(tri_area)
    cum /= cum[-1]
    idx = np.searchsorted(cum, rng.random(n))
    u = rng.random(n)
    w = rng.random(n)
    flip = u + w > 1.0
    u[flip] = 1.0 - u[flip]
    w[flip] = 1.0 - w[flip]
    pts = c + u[:, None] * (a[idx] - c) + w[:, None] * (b[idx] - c)
    return pts


def _lattice_points(domain: ConvexPolygon, rng, sigma: float):
    """Triangular lattice of unit-area cells clipped to the domain.

    The lattice is centered on the domain centroid with a tiny shift so that
    commensurate boundaries count points half-open, then jittered.
    """
    a = LATTICE_SPACING
    h = LATTICE_ROW_H
    c = centroid(domain)
    v = domain.vertices
    xmin, ymin = v.min(axis=0)
    xmax, ymax = v.max(axis=0)
    j_lo = math.floor((ymin - c[1]) / h) - 1
    j_hi = math.ceil((ymax - c[1]) / h) + 1
    pts = []
    shift = 1e-4
    for j in range(j_lo, j_hi + 1):
        y = c[1] + (j + shift) * h
        row_off = 0.5 if j % 2 else 0.0
        k_lo = math.floor((xmin - c[0]) / a) - 1
        k_hi = math.ceil((xmax - c[0]) / a) + 1
        for k in range(k_lo, k_hi + 1):
            pts.append((c[0] + (k + row_off + shift) * a, y))
    pts = np.asarray(pts)
    pts = pts[contains_many(domain, pts)]
    if sigma > 0.0 and len(pts):
        jitter = sigma * rng.standard_normal(pts.shape)
        cand = pts + jitter
        bad = ~contains_many(domain, cand)
        tries = 0
        while bad.any() and tries < 100:
            cand[bad] = pts[bad] + sigma * rng.standard_normal((int(bad.sum()), 2))
            bad = ~contains_many(domain, cand)
            tries += 1
        cand[bad] = pts[bad]
        pts = cand
    return pts


def init_configuration(cfg: SolverConfig, domain: ConvexPolygon) -> Configuration:
    """Initial configuration on the given (rescaled-frame) domain."""
    rng = _rng(cfg.seed)
    dom_area = area(domain)
    if isinstance(cfg.init, RandomUniform):
        if cfg.init.n < 1:
            raise EmptyInput("RandomUniform needs n >= 1")
        pts = _uniform_in_polygon(rng, domain, cfg.init.n)
        # keep sites separated so the diagram never sees duplicates
        for _ in range(100):
            if len(pts) == 1:
                break
            d2 = ((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=2)
            d2 += np.eye(len(pts)) * 1e30
            bad = np.unique(np.argwhere(d2 < (1e-8 * math.sqrt(dom_area)) ** 2)[:, 0])
            if len(bad) == 0:
                break
            pts[bad] = _uniform_in_polygon(rng, domain, len(bad))
    else:
        pts = _lattice_points(domain, rng, cfg.init.sigma)
        if len(pts) == 0:
            raise EmptyInput("domain is too small for a unit-area lattice cell")
    masses = np.full(len(pts), dom_area / len(pts))
    return Configuration(domain, pts, masses, Frame.rescaled(cfg.alpha), _validated=True)


class _Eval:
    __slots__ = ("diagram", "energy", "live", "centroids", "areas", "n_removed")

    def __init__(self, diagram, energy, live, centroids, areas, n_removed):
        self.diagram = diagram
        self.energy = energy
        self.live = live
        self.centroids = centroids
        self.areas = areas
        self.n_removed = n_removed


def _evaluate(domain, positions, masses, frame) -> _Eval:
    weights = optimal_weights(masses, frame)
    diagram = _diagram(domain, positions, weights)
    live = diagram.areas > 0.0
    if not live.any():
        raise InternalError("every cell clipped to empty")
    energy = _energy_from_stats(diagram.areas, diagram.cell_moments, frame)
    return _Eval(
        diagram=diagram,
        energy=energy,
        live=live,
        centroids=diagram.centroids[live],
        areas=diagram.areas[live],
        n_removed=int((~live).sum()),
    )


def lloyd_step(state: Configuration) -> tuple[Configuration, EnergyBreakdown]:
    """One generalized Lloyd update; returns the moved state and the energy
    of the move (the partition energy of the state's diagram)."""
    ev = _evaluate(state.domain, state.positions, state.masses, state.frame)
    new = Configuration(state.domain, ev.centroids, ev.areas, state.frame, _validated=True)
    return new, ev.energy


def adapt_particle_count(state: Configuration, diagram: LaguerreDiagram) -> Configuration:
    """Merge negative-delta adjacent pairs, then trial a split of the
    heaviest particle; the split is kept only if five relaxation steps end
    strictly below the current energy."""
    pos, mass, events, _ = _adapt_arrays(
        state.domain,
        state.positions,
        state.masses,
        state.frame,
        diagram,
        accepted_total=None,
    )
    if events == 0:
        return state
    return Configuration(state.domain, pos, mass, state.frame, _validated=True)


def _relax(domain, pos, mass, frame, steps=RELAX_STEPS):
    for _ in range(steps):
        ev = _evaluate(domain, pos, mass, frame)
        pos, mass = ev.centroids, ev.areas
    return pos, mass, _evaluate(domain, pos, mass, frame)


def _adapt_arrays(domain, pos, mass, frame, diagram, accepted_total):
    """Returns (positions, masses, events, eval_or_None). When
    accepted_total is given, changes are kept only if the relaxed energy
    does not exceed it (merges) or falls strictly below it (split)."""
    n = len(mass)
    if accepted_total is None:
        base = _energy_from_stats(diagram.areas, diagram.cell_moments, frame).total
    else:
        base = accepted_total
    tol = ACCEPT_REL_TOL * abs(base)

    cand = []
    for i, j in diagram.adjacency:
        if i < n and j < n:
            d = merge_delta(mass[i], mass[j], pos[i], pos[j], frame)
            if d < -tol:
                cand.append((d, i, j))
    cand.sort()
    used: set[int] = set()
    merges = []
    for _, i, j in cand:
        if i in used or j in used:
            continue
        merges.append((i, j))
        used.add(i)
        used.add(j)
    if merges:
        keep = np.ones(n, dtype=bool)
        new_pos = pos.copy()
        new_mass = mass.copy()
        for i, j in merges:
            tot = mass[i] + mass[j]
            new_pos[i] = (mass[i] * pos[i] + mass[j] * pos[j]) / tot
            new_mass[i] = tot
            keep[j] = False
        new_pos = new_pos[keep]
        new_mass = new_mass[keep]
        rp, rm, ev = _relax(domain, new_pos, new_mass, frame)
        if ev.energy.total <= base + tol:
            return rp, rm, len(merges), ev
        return pos, mass, 0, None

    # split trial: heaviest particle, duplicated along its cell's longest axis
    k = int(np.argmax(mass))
    cell = diagram.cells[k]
    v = cell.vertices
    if len(v) < 3:
        return pos, mass, 0, None
    d = v[:, None, :] - v[None, :, :]
    d2 = np.einsum("ijk,ijk->ij", d, d)
    a_idx, b_idx = np.unravel_index(int(np.argmax(d2)), d2.shape)
    axis = v[b_idx] - v[a_idx]
    axis_len = math.sqrt(float((axis**2).sum()))
    if axis_len == 0.0:
        return pos, mass, 0, None
    offset = 0.25 * axis_len * axis / axis_len
    za = pos[k] + 0.5 * offset
    zb = pos[k] - 0.5 * offset
    if not contains_many(domain, np.array([za, zb])).all():
        return pos, mass, 0, None
    new_pos = np.vstack([pos[:k], [za, zb], pos[k + 1 :]])
    new_mass = np.concatenate([mass[:k], [mass[k] / 2.0, mass[k] / 2.0], mass[k + 1 :]])
    rp, rm, ev = _relax(domain, new_pos, new_mass, frame)
    if ev.energy.total < base:
        return rp, rm, 1, ev
    return pos, mass, 0, None


def solve(cfg: SolverConfig, domain: ConvexPolygon) -> SolveResult:
    """Minimize the rescaled energy on the blow-up of the given physical
    domain. The returned configuration lives in the rescaled frame."""
    frame = Frame.rescaled(cfg.alpha)
    volume = rescale_volume(cfg.alpha, cfg.delta)
    rdomain = scaled(domain, math.sqrt(volume))
    rarea = area(rdomain)
    n_target = cfg.init.n if isinstance(cfg.init, RandomUniform) else max(1, round(rarea))
    tol_pos = cfg.tol_pos if cfg.tol_pos is not None else 1e-8 * math.sqrt(rarea)
    tol_mass = cfg.tol_mass if cfg.tol_mass is not None else 1e-8 * rarea / n_target

    state0 = init_configuration(cfg, rdomain)
    pos = state0.positions
    mass = state0.masses

    ev = _evaluate(rdomain, pos, mass, frame)
    accepted = ev.energy
    trace = [accepted.total]
    removed = 0
    adapt_events = 0
    adapt_rounds = 0
    iterations = 0
    converged = False
    stalled = False

    while iterations < cfg.max_iters:
        if abs(float(ev.diagram.areas.sum()) - rarea) > 1e-8 * rarea:
            raise InternalError("partition leaked area")
        all_live = ev.n_removed == 0
        if all_live:
            resid_pos = float(np.max(np.linalg.norm(pos - ev.centroids, axis=1)))
            resid_mass = float(np.max(np.abs(mass - ev.areas)))
            if resid_pos <= tol_pos and resid_mass <= tol_mass:
                if cfg.adapt and adapt_rounds < MAX_ADAPT_ROUNDS:
                    adapt_rounds += 1
                    npos, nmass, events, nev = _adapt_arrays(
                        rdomain, pos, mass, frame, ev.diagram, accepted.total
                    )
                    if events:
                        pos, mass, ev = npos, nmass, nev
                        accepted = ev.energy
                        trace.append(accepted.total)
                        adapt_events += events
                        continue
                converged = True
                break

        iterations += 1
        prop_pos, prop_mass = ev.centroids, ev.areas
        theta = 1.0
        while True:
            if theta == 1.0 or not all_live:
                cand_pos, cand_mass = prop_pos, prop_mass
            else:
                cand_pos = theta * prop_pos + (1.0 - theta) * pos
                cand_mass = theta * prop_mass + (1.0 - theta) * mass
            cand_ev = _evaluate(rdomain, cand_pos, cand_mass, frame)
            if cand_ev.energy.total <= accepted.total + ACCEPT_REL_TOL * abs(accepted.total):
                removed += ev.n_removed
                pos, mass, ev = cand_pos, cand_mass, cand_ev
                accepted = cand_ev.energy
                trace.append(accepted.total)
                break
            if not all_live:
                stalled = True
                break
            theta *= 0.5
            if theta < THETA_MIN:
                stalled = True
                break
        if stalled:
            break

        # mid-run merges help random starts shed sliver cells early
        if (
            cfg.adapt
            and iterations % 50 == 0
            and float(mass.min()) < 0.3 * rarea / max(1, len(mass))
            and adapt_rounds < MAX_ADAPT_ROUNDS
        ):
            adapt_rounds += 1
            npos, nmass, events, nev = _adapt_arrays(rdomain, pos, mass, frame, ev.diagram, accepted.total)
            if events:
                pos, mass, ev = npos, nmass, nev
                accepted = ev.energy
                trace.append(accepted.total)
                adapt_events += events

    final = Configuration(rdomain, pos, mass, frame, _validated=True)
    return SolveResult(
        final=final,
        diagram=ev.diagram,
        energy=accepted,
        trace=trace,
        iterations=iterations,
        converged=converged,
        removed_particles=removed,
        adaptation_events=adapt_events,
        volume=volume,
        seed=cfg.seed,
    )


def _solve_task(args):
    cfg, domain, run = args
    return run, solve(cfg, domain)


def thread_cap() -> int:
    raw = os.environ.get(THREADS_ENV, "")
    if raw.strip():
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return os.cpu_count() or 1


def multistart(cfg: SolverConfig, domain: ConvexPolygon) -> SolveResult:
    """Best-energy result over cfg.multistart independently seeded runs
    (seeds = cfg.seed + run index); ties broken by run index."""
    runs = [(replace(cfg, seed=cfg.seed + k, multistart=1), domain, k) for k in range(cfg.multistart)]
    if len(runs) == 1:
        return solve(runs[0][0], domain)
    workers = min(thread_cap(), len(runs))
    results: list[tuple[int, SolveResult]] = []
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_solve_task, runs))
    else:
        results = [_solve_task(r) for r in runs]
    results.sort(key=lambda kr: (kr[1].energy.total, kr[0]))
    return results[0][1]


def interior_mass_violations(result: SolveResult) -> int:
    """Particles farther than 4 rescaled units from the domain boundary
    whose mass falls below the interior floor. Reported, never fatal."""
    dom = result.final.domain.vertices
    pos = result.final.positions
    e = np.roll(dom, -1, axis=0) - dom
    elen = np.linalg.norm(e, axis=1)
    rel = pos[:, None, :] - dom[None, :, :]
    # distance from interior points to each boundary edge's line
    dist = (e[None, :, 0] * rel[:, :, 1] - e[None, :, 1] * rel[:, :, 0]) / elen[None, :]
    d_boundary = dist.min(axis=1)
    interior = d_boundary >= 4.0
    return int((result.final.masses[interior] <= MASS_FLOOR_INTERIOR).sum())
