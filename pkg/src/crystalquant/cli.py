"""Command-line entry points, config files, persistence, and figure/table
emission.

Commands: solve <config.json>, table1, verify, stability, render,
moment-test. Exit codes: 0 success, 1 usage/parse error, 2 non-convergence
(or failed verification/property run). CRYSTALQUANT_THREADS caps worker
parallelism.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

import numpy as np

from .energy_model import c_n
from .geometry import ConvexPolygon, area, centroid, regular_ngon, second_moment_about, unit_square
from .lloyd_solver import (
    LatticePerturbed,
    RandomUniform,
    SolveResult,
    SolverConfig,
    multistart,
    thread_cap,
)
from .stability import analyze
from .svg_render import render_diagram
from .verification import run_all

__all__ = ["main", "REFERENCE_ROWS"]

RESULT_SCHEMA = "crystalquant/solve-result/v1"
CONFIG_SCHEMA = "crystalquant/run-config/v1"

# benchmark (alpha, delta) pairs with the recorded reference ratios
REFERENCE_ROWS = (
    (0.1, 0.0022433361900, 1.025664680453751),
    (0.1, 0.0001302910000, 1.012634927464421),
    (0.1, 7.5672376050508e-6, 1.006166789745220),
    (0.583, 0.0147231527000, 1.015173622346968),
    (0.583, 0.0017628730000, 1.007372522192174),
    (0.583, 2.1107719443098e-4, 1.003575800389361),
    (0.9, 0.1273904500000, 1.004506412114665),
    (0.9, 0.0245228180000, 1.002133746895388),
    (0.9, 0.004720672550584, 1.001028468127525),
)


def _fail(msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return 1


def _load_json(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _domain_from_spec(spec) -> ConvexPolygon:
    if spec == "unit_square" or spec is None:
        return unit_square()
    return ConvexPolygon(spec)


def _parse_run_config(doc) -> tuple[SolverConfig, ConvexPolygon, dict]:
    init_doc = doc.get("init", {"kind": "lattice", "sigma": 0.05})
    kind = init_doc.get("kind")
    if kind == "random":
        init = RandomUniform(int(init_doc["n"]))
    elif kind == "lattice":
        init = LatticePerturbed(float(init_doc.get("sigma", 0.0)))
    else:
        raise ValueError(f"unknown init kind {kind!r}")
    cfg = SolverConfig(
        alpha=float(doc["alpha"]),
        delta=float(doc["delta"]),
        init=init,
        max_iters=int(doc.get("max_iters", 5000)),
        tol_pos=doc.get("tol_pos"),
        tol_mass=doc.get("tol_mass"),
        multistart=int(doc.get("multistart", 1)),
        seed=int(doc.get("seed", 0)),
        adapt=bool(doc.get("adapt", True)),
    )
    domain = _domain_from_spec(doc.get("domain", "unit_square"))
    emit = doc.get("emit", {"svg": True, "json": True, "csv": False})
    return cfg, domain, {"output_dir": doc.get("output_dir", "."), "emit": emit}


def result_to_dict(cfg: SolverConfig, domain: ConvexPolygon, res: SolveResult, runtime_ms: int):
    return {
        "schema": RESULT_SCHEMA,
        "alpha": cfg.alpha,
        "delta": cfg.delta,
        "seed": res.seed,
        "multistart": cfg.multistart,
        "volume": res.volume,
        "n": res.final.n,
        "converged": res.converged,
        "iterations": res.iterations,
        "removed_particles": res.removed_particles,
        "adaptation_events": res.adaptation_events,
        "energy": {
            "transport": res.energy.transport,
            "entropy": res.energy.entropy,
            "total": res.energy.total,
            "rescaled_ratio": res.energy.rescaled_ratio,
            "defect": res.energy.defect,
        },
        "trace": res.trace,
        "domain_physical": domain.vertices.tolist(),
        "domain_rescaled": res.final.domain.vertices.tolist(),
        "positions": res.final.positions.tolist(),
        "masses": res.final.masses.tolist(),
        "runtime_ms": runtime_ms,
    }


def cmd_solve(args) -> int:
    try:
        doc = _load_json(args.config)
        cfg, domain, io_opts = _parse_run_config(doc)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        return _fail(f"bad config {args.config}: {exc}")
    t0 = time.perf_counter()
    res = multistart(cfg, domain)
    runtime_ms = int((time.perf_counter() - t0) * 1000)
    outdir = Path(io_opts["output_dir"])
    outdir.mkdir(parents=True, exist_ok=True)
    stem = Path(args.config).stem
    doc_out = result_to_dict(cfg, domain, res, runtime_ms)
    out_json = outdir / f"{stem}.result.json"
    out_json.write_text(json.dumps(doc_out, indent=1))
    print(f"wrote {out_json}")
    if io_opts["emit"].get("svg"):
        out_svg = outdir / f"{stem}.svg"
        out_svg.write_text(render_diagram(res.diagram, res.final.positions))
        print(f"wrote {out_svg}")
    print(
        f"alpha={cfg.alpha} delta={cfg.delta} N={res.final.n} "
        f"ratio={res.energy.rescaled_ratio:.15f} converged={res.converged}"
    )
    return 0 if res.converged else 2


def _table_task(payload):
    row, alpha, delta, ref, starts, seed, max_iters = payload
    lattice = max(1, starts - starts // 2)
    rand = starts - lattice
    n_target = None
    t0 = time.perf_counter()
    cfg = SolverConfig(
        alpha=alpha,
        delta=delta,
        init=LatticePerturbed(0.05),
        multistart=lattice,
        seed=seed,
        max_iters=max_iters,
    )
    best = multistart(cfg, unit_square())
    if rand:
        n_target = max(1, round(best.volume))
        cfg_r = replace(cfg, init=RandomUniform(n_target), multistart=rand, seed=seed + 1000)
        other = multistart(cfg_r, unit_square())
        if other.energy.total < best.energy.total:
            best = other
    runtime_ms = int((time.perf_counter() - t0) * 1000)
    return row, alpha, delta, best.energy.rescaled_ratio, ref, best.final.n, runtime_ms, best.converged


def cmd_table1(args) -> int:
    rows = list(enumerate(REFERENCE_ROWS))
    if args.rows:
        wanted = {int(r) for r in args.rows.split(",")}
        rows = [r for r in rows if r[0] in wanted]
    payloads = [
        (i, alpha, delta, ref, args.starts, args.seed, args.max_iters)
        for i, (alpha, delta, ref) in rows
    ]
    workers = min(thread_cap(), len(payloads))
    if workers > 1:
        # one process per row; each row's multistart then runs serially
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_table_task, payloads))
    else:
        results = [_table_task(p) for p in payloads]
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    out_csv = outdir / "table1.csv"
    all_converged = True
    with open(out_csv, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["alpha", "delta", "computed_ratio", "paper_ratio", "n_final", "runtime_ms"])
        for _, alpha, delta, ratio, ref, n_final, runtime_ms, conv in results:
            writer.writerow([repr(alpha), repr(delta), repr(ratio), repr(ref), n_final, runtime_ms])
            all_converged = all_converged and conv
            print(
                f"alpha={alpha:<6} delta={delta:<22} computed={ratio:.15f} "
                f"reference={ref:.15f} N={n_final} ({runtime_ms} ms)"
            )
    print(f"wrote {out_csv}")
    return 0 if all_converged else 2


def cmd_verify(args) -> int:
    mode = "compensated" if args.compensated else "double"
    report = run_all(mode)
    if args.out:
        out = Path(args.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(json.dumps(report.as_dict(), indent=1))
        print(f"wrote {out}")
    width = max(len(c.id) for c in report.claims)
    for c in report.claims:
        status = "pass" if c.passed else "FAIL"
        flag = " thin" if c.thin else ""
        print(
            f"{c.id:<{width}}  {c.computed: .12e} {c.direction} "
            f"{c.claimed_bound: .6e}  [{status}]{flag}"
        )
    print(f"{len(report.claims)} claims, all_pass={report.all_pass} ({report.precision_mode})")
    return 0 if report.all_pass else 2


def cmd_stability(args) -> int:
    try:
        doc = _load_json(args.result)
    except OSError as exc:
        return _fail(f"cannot read {args.result}: {exc}")
    if doc.get("schema") != RESULT_SCHEMA:
        return _fail(f"{args.result} is not a solve result")
    points = np.asarray(doc["positions"])
    domain = ConvexPolygon(doc["domain_rescaled"])
    report = analyze(points, domain, doc["volume"], args.epsilon)
    base = Path(args.result).with_suffix("")
    out_json = Path(f"{base}.stability.json")
    out_json.write_text(json.dumps(report.as_dict(), indent=1))
    bad = {
        c.index
        for c in report.per_cell
        if not c.boundary and (not c.is_hexagon or c.max_vertex_dev > args.epsilon ** (1 / 3))
    }
    out_svg = Path(f"{base}.stability.svg")
    out_svg.write_text(render_diagram(report.diagram, points, highlight=bad))
    frac_hex = report.hexagon_interior / max(1, report.interior_cells)
    print(f"wrote {out_json}")
    print(f"wrote {out_svg}")
    print(
        f"N={report.n} interior={report.interior_cells} hexagons={report.hexagon_interior} "
        f"({100 * frac_hex:.1f}%) vertex_violations={report.vertex_violations} "
        f"edge_violations={report.edge_violations} eps_hat={report.eps_hat:.6g}"
    )
    return 0


def cmd_render(args) -> int:
    try:
        doc = _load_json(args.result)
    except OSError as exc:
        return _fail(f"cannot read {args.result}: {exc}")
    if doc.get("schema") != RESULT_SCHEMA:
        return _fail(f"{args.result} is not a solve result")
    from .laguerre import _diagram
    from .quantization import Frame, optimal_weights

    domain = ConvexPolygon(doc["domain_rescaled"])
    positions = np.asarray(doc["positions"])
    masses = np.asarray(doc["masses"])
    frame = Frame.rescaled(doc["alpha"])
    diagram = _diagram(domain, positions, optimal_weights(masses, frame))
    out = Path(args.result).with_suffix(".svg")
    out.write_text(render_diagram(diagram, positions))
    print(f"wrote {out}")
    return 0


def cmd_moment_test(args) -> int:
    """Property run: polygon second moments dominate c_n |P|^2, with
    equality for regular polygons about their centers."""
    if args.samples < 1:
        return _fail("--samples must be >= 1")
    rng = np.random.Generator(np.random.Philox(key=args.seed))
    violations = 0
    worst = math.inf
    for _ in range(args.samples):
        n = int(rng.integers(3, 10))
        poly = _random_convex_ngon(rng, n)
        ref = centroid(poly) + rng.normal(0.0, 0.8, size=2)
        gap = second_moment_about(poly, ref) - c_n(n) * area(poly) ** 2
        worst = min(worst, gap)
        if gap < -1e-10:
            violations += 1
    for n in range(3, 10):
        poly = regular_ngon(n, 1.0)
        gap = abs(second_moment_about(poly, centroid(poly)) - c_n(n))
        if gap > 1e-10:
            violations += 1
    print(f"{args.samples} random polygons, worst gap {worst:.3e}, violations={violations}")
    return 0 if violations == 0 else 2


def _random_convex_ngon(rng, n):
    """Random n-gon in convex position: points on a circle pushed through a
    random positive-definite map."""
    ang = np.sort(rng.uniform(0.0, 2.0 * math.pi, size=n))
    while np.min(np.diff(ang)) < 1e-3:
        ang = np.sort(rng.uniform(0.0, 2.0 * math.pi, size=n))
    pts = np.column_stack([np.cos(ang), np.sin(ang)])
    a = rng.normal(0.0, 1.0, size=(2, 2))
    m = a @ a.T + 0.3 * np.eye(2)
    return ConvexPolygon(_ccw(pts @ m + rng.normal(0.0, 2.0, size=2)))


def _ccw(pts):
    x, y = pts[:, 0], pts[:, 1]
    if 0.5 * np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y) < 0:
        return pts[::-1]
    return pts


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="crystalquant",
        description="Wasserstein quantization workbench: solver, benchmark table, "
        "bound verification, crystallization diagnostics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run the solver from a JSON run config")
    p.add_argument("config")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("table1", help="recompute the nine benchmark ratios")
    p.add_argument("--out", default=".")
    p.add_argument("--starts", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-iters", type=int, default=5000)
    p.add_argument("--rows", default="", help="comma-separated row indices (default: all)")
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("verify", help="re-verify the recorded numerical bounds")
    p.add_argument("--compensated", action="store_true")
    p.add_argument("--out", default="")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("stability", help="lattice-closeness report for a solve result")
    p.add_argument("result")
    p.add_argument("--epsilon", type=float, required=True)
    p.set_defaults(func=cmd_stability)

    p = sub.add_parser("render", help="render a solve result to SVG")
    p.add_argument("result")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("moment-test", help="randomized minimal-moment property run")
    p.add_argument("--samples", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_moment_test)

    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
