"""Benchmark command line.

Subcommands:

* ``run``      — load or generate a graph, run one application to
                 convergence under the chosen engine, emit per-iteration
                 statistics (CSV on stdout, human summary on stderr; or one
                 JSON document with ``--format json``).
* ``sweep``    — re-run while sweeping the fullness threshold or the
                 frontier precision; one summary row per value. Tuning must
                 not change results, so all rows carry the same digest.
* ``generate`` — write a synthetic graph as an edge-list file.
* ``bench``    — run the same workload on the compiled and the pure-python
                 kernel backends and report the timing ratio.

Exit codes: 0 converged, 2 stopped at the iteration limit, 1 usage or input
error. ``WEDGE_WORKERS`` provides the default for ``--workers``.

CSV schema (exact): iteration,mode,transform_ms,pull_ms,active_edge_pct,
vectors_touched,frontier_out — for the push engine the work column carries
edges touched.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from time import perf_counter

from . import apps as apps_mod
from .engine import (
    MODE_WEDGE,
    EngineConfig,
    IterationStats,
    RunResult,
    result_digest,
    run_until_convergence,
)
from .frontier import DEFAULT_SLICE_SIZE, FrontierPrecision, FullnessThreshold
from .graph import build_edge_index, build_pull_topology, build_push_topology, compute_out_degrees
from .graph_io import GenSpec, generate, parse_edge_list, serialize_edge_list, symmetrize, synthesize_weights
from .kernels import available_backends, get_backend
from .push_ref import run_until_convergence_push

CSV_HEADER = "iteration,mode,transform_ms,pull_ms,active_edge_pct,vectors_touched,frontier_out"

# Experimentally-motivated defaults: a coarser, rarely-transformed frontier
# suits BFS's fast-changing sparse frontier; CC/SSSP favor finer groups and
# a higher threshold.
APP_DEFAULTS = {
    "bfs": (FrontierPrecision(8), FullnessThreshold.of("0.01")),
    "cc": (FrontierPrecision(4), FullnessThreshold.of("0.20")),
    "sssp": (FrontierPrecision(4), FullnessThreshold.of("0.20")),
}

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_MAX_ITERS = 2


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # usage errors exit 1, not argparse's default 2
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="wedgegraph", description="Pull-only graph engine benchmark harness")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_graph_flags(p):
        p.add_argument("--graph", help="edge-list file to load")
        p.add_argument("--gen", help="generator spec: path:N | grid:R:C | rmat:SCALE:EF[:A:B:C:D]")
        p.add_argument("--seed", type=int, default=1, help="generator seed")
        p.add_argument("--dedup", action="store_true", help="deduplicate edges when symmetrizing")

    def add_run_flags(p):
        p.add_argument("--app", required=True, choices=("bfs", "cc", "sssp"))
        p.add_argument("--root", type=int, help="root vertex for bfs/sssp")
        p.add_argument("--threshold", help="frontier fullness threshold in [0, 1]")
        p.add_argument("--precision", type=int, help="edge vectors per frontier bit")
        p.add_argument("--vector-width", type=int, default=4)
        p.add_argument("--workers", type=int, default=None)
        p.add_argument("--slice-size", type=int, default=DEFAULT_SLICE_SIZE)
        p.add_argument("--max-iters", type=int, default=None)
        p.add_argument("--max-weight", type=int, default=255, help="synthesized weight bound for sssp")
        p.add_argument("--backend", default="auto", choices=("auto",) + available_backends())

    run = sub.add_parser("run", help="run one application to convergence")
    add_graph_flags(run)
    add_run_flags(run)
    run.add_argument("--engine", default="wedge", choices=("wedge", "full", "push"))
    run.add_argument("--format", default="csv", choices=("csv", "json"))

    sweep = sub.add_parser("sweep", help="sweep a tuning parameter")
    add_graph_flags(sweep)
    add_run_flags(sweep)
    sweep.add_argument("--sweep", required=True, choices=("threshold", "precision"))
    sweep.add_argument("--values", required=True, help="comma-separated list of swept values")

    gen = sub.add_parser("generate", help="write a synthetic edge-list file")
    gen.add_argument("--gen", required=True)
    gen.add_argument("--seed", type=int, default=1)
    gen.add_argument("--out", required=True)
    gen.add_argument("--weights", type=int, help="also synthesize weights up to this bound")

    bench = sub.add_parser("bench", help="compare kernel backends on one workload")
    add_graph_flags(bench)
    add_run_flags(bench)

    return parser


def _load_edges(args):
    if bool(args.graph) == bool(args.gen):
        raise CliError("exactly one of --graph or --gen is required")
    if args.graph:
        try:
            with open(args.graph, "r", encoding="utf-8") as fh:
                return parse_edge_list(fh.read())
        except OSError as exc:
            raise CliError(f"cannot read {args.graph}: {exc}") from None
    return generate(GenSpec.parse(args.gen, seed=args.seed))


def _prepare(args):
    """Load the graph and instantiate the program, applying app preconditions."""
    edges = _load_edges(args)
    if args.app == "cc":
        edges = symmetrize(edges, dedup=args.dedup)
    if args.app in ("bfs", "sssp"):
        if args.root is None:
            raise CliError(f"--root is required for {args.app}")
        if not 0 <= args.root < edges.vertex_count:
            raise CliError(f"root {args.root} out of range [0, {edges.vertex_count})")
    if args.app == "sssp" and not edges.is_weighted():
        edges = synthesize_weights(edges, args.max_weight)
    program = apps_mod.make_program(args.app, args.root)
    return edges, program


def _workers(args) -> int:
    if args.workers is not None:
        return args.workers
    env = os.environ.get("WEDGE_WORKERS")
    return int(env) if env else 1


def _config(args, edges, threshold=None, precision=None) -> EngineConfig:
    default_precision, default_threshold = APP_DEFAULTS[args.app]
    if threshold is None:
        threshold = FullnessThreshold.of(args.threshold) if args.threshold is not None else default_threshold
    if precision is None:
        precision = FrontierPrecision(args.precision) if args.precision is not None else default_precision
    max_iters = args.max_iters if args.max_iters is not None else edges.vertex_count + 16
    return EngineConfig(
        threshold=threshold,
        precision=precision,
        workers=_workers(args),
        slice_size=args.slice_size,
        max_iterations=max(1, max_iters),
    )


def _execute(args, edges, program, config, engine: str, backend=None) -> RunResult:
    if engine == "push":
        topology = build_push_topology(edges)
        return run_until_convergence_push(
            topology, program, compute_out_degrees(edges), config.max_iterations
        )
    if engine == "full":
        config = EngineConfig(
            threshold=FullnessThreshold.of(0),
            precision=config.precision,
            workers=config.workers,
            slice_size=config.slice_size,
            max_iterations=config.max_iterations,
        )
    topology = build_pull_topology(edges, args.vector_width)
    index = build_edge_index(topology)
    degrees = compute_out_degrees(edges)
    return run_until_convergence(
        topology, index, program, degrees, config, backend=get_backend(backend or args.backend)
    )


def _csv_rows(result: RunResult):
    yield CSV_HEADER
    for s in result.stats:
        pct = float(s.active_edge_fraction) * 100 if s.active_edge_fraction is not None else 0.0
        work = s.vectors_touched if isinstance(s, IterationStats) else s.edges_touched
        yield (
            f"{s.iteration},{s.mode},{s.transform_time * 1000:.3f},{s.pull_time * 1000:.3f},"
            f"{pct:.4f},{work},{s.frontier_out_size}"
        )


def _totals(result: RunResult, wall: float) -> dict:
    work = sum(
        (s.vectors_touched if isinstance(s, IterationStats) else s.edges_touched) for s in result.stats
    )
    return {
        "iterations": result.iterations,
        "converged": result.converged,
        "wedge_iterations": sum(1 for s in result.stats if s.mode == MODE_WEDGE),
        "work_touched": int(work),
        "transform_ms": round(sum(s.transform_time for s in result.stats) * 1000, 3),
        "pull_ms": round(sum(s.pull_time for s in result.stats) * 1000, 3),
        "wall_ms": round(wall * 1000, 3),
        "digest": result_digest(result.values),
    }


def _cmd_run(args) -> int:
    edges, program = _prepare(args)
    config = _config(args, edges)
    start = perf_counter()
    result = _execute(args, edges, program, config, args.engine)
    wall = perf_counter() - start
    totals = _totals(result, wall)

    if args.format == "csv":
        for row in _csv_rows(result):
            print(row)
        echo = {
            "app": args.app,
            "engine": args.engine,
            "graph": args.graph or args.gen,
            "vertices": edges.vertex_count,
            "edges": edges.edge_count,
            "vector_width": args.vector_width,
            "threshold": str(config.threshold.fraction),
            "precision": config.precision.vectors_per_group,
            "workers": config.workers,
        }
        print(f"# config {json.dumps(echo)}", file=sys.stderr)
        print(f"# totals {json.dumps(totals)}", file=sys.stderr)
    else:
        doc = {
            "config": {
                "app": args.app,
                "engine": args.engine,
                "graph": args.graph or args.gen,
                "vertices": edges.vertex_count,
                "edges": edges.edge_count,
                "vector_width": args.vector_width,
                "threshold": str(config.threshold.fraction),
                "precision": config.precision.vectors_per_group,
                "workers": config.workers,
                "max_iterations": config.max_iterations,
            },
            "iterations": [
                {
                    "iteration": s.iteration,
                    "mode": s.mode,
                    "transform_ms": s.transform_time * 1000,
                    "pull_ms": s.pull_time * 1000,
                    "active_edge_pct": float(s.active_edge_fraction or 0) * 100,
                    "work_touched": s.vectors_touched if isinstance(s, IterationStats) else s.edges_touched,
                    "frontier_out": s.frontier_out_size,
                }
                for s in result.stats
            ],
            "totals": totals,
        }
        print(json.dumps(doc, indent=2))
    return EXIT_OK if result.converged else EXIT_MAX_ITERS


def _cmd_sweep(args) -> int:
    values = [v for v in args.values.split(",") if v.strip()]
    if not values:
        raise CliError("sweep value list is empty")
    edges, program = _prepare(args)

    print("value,iterations,wedge_iterations,fullscan_iterations,work_touched,wall_ms,digest")
    exit_code = EXIT_OK
    for raw in values:
        raw = raw.strip()
        if args.sweep == "threshold":
            config = _config(args, edges, threshold=FullnessThreshold.of(raw))
        else:
            config = _config(args, edges, precision=FrontierPrecision(int(raw)))
        start = perf_counter()
        result = _execute(args, edges, program, config, "wedge")
        totals = _totals(result, perf_counter() - start)
        if not result.converged:
            exit_code = EXIT_MAX_ITERS
        print(
            f"{raw},{totals['iterations']},{totals['wedge_iterations']},"
            f"{totals['iterations'] - totals['wedge_iterations']},{totals['work_touched']},"
            f"{totals['wall_ms']},{totals['digest']}"
        )
    return exit_code


def _cmd_generate(args) -> int:
    edges = generate(GenSpec.parse(args.gen, seed=args.seed))
    if args.weights is not None:
        edges = synthesize_weights(edges, args.weights)
    try:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(serialize_edge_list(edges))
    except OSError as exc:
        raise CliError(f"cannot write {args.out}: {exc}") from None
    print(f"wrote {edges.vertex_count} vertices, {edges.edge_count} edges to {args.out}", file=sys.stderr)
    return EXIT_OK


def _cmd_bench(args) -> int:
    """Same workload on each kernel backend; graph built once, best of 3 runs."""
    edges, program = _prepare(args)
    config = _config(args, edges)
    topology = build_pull_topology(edges, args.vector_width)
    index = build_edge_index(topology)
    degrees = compute_out_degrees(edges)

    rows = []
    for name in ("native", "python"):
        if name not in available_backends():
            print(f"{name:>7}: not available", file=sys.stderr)
            continue
        backend = get_backend(name)
        best = None
        for _ in range(3):
            start = perf_counter()
            result = run_until_convergence(topology, index, program, degrees, config, backend=backend)
            wall = perf_counter() - start
            if best is None or wall < best[0]:
                best = (wall, result)
        totals = _totals(best[1], best[0])
        rows.append((name, totals))
        print(
            f"{name:>7}: wall {totals['wall_ms']:9.2f} ms  pull {totals['pull_ms']:9.2f} ms  "
            f"transform {totals['transform_ms']:8.2f} ms  iters {totals['iterations']:3d}  "
            f"digest {totals['digest']}"
        )
    if len(rows) == 2:
        digests = {t["digest"] for _, t in rows}
        ratio = rows[1][1]["wall_ms"] / max(rows[0][1]["wall_ms"], 1e-9)
        print(f"speedup (python/native): {ratio:.2f}x; digests {'match' if len(digests) == 1 else 'DIFFER'}")
        if len(digests) != 1:
            return EXIT_USAGE
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handlers = {"run": _cmd_run, "sweep": _cmd_sweep, "generate": _cmd_generate, "bench": _cmd_bench}
    try:
        return handlers[args.command](args)
    except (CliError, ValueError) as exc:
        print(f"wedgegraph: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
