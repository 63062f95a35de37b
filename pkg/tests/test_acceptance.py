"""Acceptance gate: exact-equivalence and work-count criteria.

Each test covers one numbered criterion and prints a single
``[acceptance] criterion N PASS/FAIL`` line. Headline timing claims from
large-machine studies are out of scope; correctness here is exact (zero
tolerance) and work counts are integer-exact.

Run with ``pytest tests/test_acceptance.py -v -s``.
"""

from __future__ import annotations

import time

import numpy as np
import pytest

import _oracles as oracles
from conftest import build_graph
from wedgegraph import (
    EdgeList,
    EngineConfig,
    FrontierPrecision,
    FullnessThreshold,
    GenSpec,
    VertexFrontier,
    bfs_program,
    cc_program,
    generate,
    make_program,
    result_digest,
    run_until_convergence,
    run_until_convergence_push,
    should_transform,
    sssp_program,
    stats_signature,
    symmetrize,
    synthesize_weights,
    transform_frontier,
    wedge_covered_vectors,
)

CORPUS_SIZE = 200
WIDTHS = (1, 2, 4)
PRECISIONS = (1, 2, 4, 8, 16)
MASTER_SEED = 20260809


def report(criterion: int, failures: list[str], detail: str = "") -> None:
    status = "FAIL" if failures else "PASS"
    extra = f" ({detail})" if detail and not failures else ""
    print(f"[acceptance] criterion {criterion} {status}{extra}")
    assert not failures, f"criterion {criterion}: " + "; ".join(failures[:10])


class Case:
    """One corpus entry: raw edges, weighted twin, symmetrized twin, root."""

    def __init__(self, index: int):
        rng = np.random.default_rng(MASTER_SEED + index)
        self.n = int(rng.integers(2, 65))
        m = int(rng.integers(1, 257))
        src = rng.integers(0, self.n, size=m)
        dst = rng.integers(0, self.n, size=m)
        self.edges = list(zip(src.tolist(), dst.tolist()))
        self.root = int(rng.integers(0, self.n))
        members = rng.choice(self.n, size=int(rng.integers(0, self.n + 1)), replace=False)
        self.frontier_members = sorted(int(v) for v in members)

        base = EdgeList(self.n, src, dst)
        weighted = synthesize_weights(base, 64)
        self.weighted_edges = list(weighted.edges())
        self.sym_edges = list(symmetrize(base).edges())


@pytest.fixture(scope="module")
def corpus():
    return [Case(i) for i in range(CORPUS_SIZE)]


def _run_config(threshold, vpg, max_iterations=100_000):
    return EngineConfig(
        threshold=FullnessThreshold.of(threshold),
        precision=FrontierPrecision(vpg),
        max_iterations=max_iterations,
    )


def _app_inputs(case: Case):
    return (
        ("bfs", case.edges, case.n, lambda: bfs_program(case.root)),
        ("cc", case.sym_edges, case.n, cc_program),
        ("sssp", case.weighted_edges, case.n, lambda: sssp_program(case.root)),
    )


def test_criterion_1_oracle_equivalence(corpus):
    """Final values and per-iteration frontiers identical across engines, W, vpg."""
    started = time.perf_counter()
    failures: list[str] = []
    for i, case in enumerate(corpus):
        for app, edges, n, make in _app_inputs(case):
            push_built = build_graph(edges, n, width=4)
            push_frontiers: list = []
            push = run_until_convergence_push(
                push_built.push, make(), push_built.degrees, frontier_log=push_frontiers
            )
            reference = (
                [int(v) for v in push.values],
                [f.tolist() for f in push_frontiers],
            )

            for width in WIDTHS:
                built = build_graph(edges, n, width)
                configs = [("full", _run_config(0, 4))]
                configs += [(f"wedge/vpg={vpg}", _run_config(1, vpg)) for vpg in PRECISIONS]
                for label, cfg in configs:
                    frontiers: list = []
                    result = run_until_convergence(
                        built.topology, built.index, make(), built.degrees, cfg, frontier_log=frontiers
                    )
                    got = ([int(v) for v in result.values], [f.tolist() for f in frontiers])
                    if got != reference:
                        failures.append(f"case {i} {app} W={width} {label} diverges from push oracle")
                        break
        if failures:
            break
    elapsed = time.perf_counter() - started
    if elapsed >= 60:
        failures.append(f"runtime {elapsed:.1f}s exceeds 60s budget")
    report(1, failures, f"{CORPUS_SIZE} graphs x 3 apps x {1 + len(WIDTHS) * (1 + len(PRECISIONS))} runs, {elapsed:.1f}s")


def _coverage_cases(case: Case):
    for width in WIDTHS:
        built = build_graph(case.edges, case.n, width)
        frontier = VertexFrontier.from_vertices(case.frontier_members, built.degrees, case.n)
        active = oracles.active_edge_multiset(case.edges, case.frontier_members)
        yield width, built, frontier, active


def test_criterion_2_coverage_soundness_and_exactness(corpus):
    failures: list[str] = []
    for i, case in enumerate(corpus):
        for width, built, frontier, active in _coverage_cases(case):
            for vpg in PRECISIONS:
                wedge = transform_frontier(frontier, built.index, FrontierPrecision(vpg))
                covered = oracles.covered_edge_multiset(
                    built.topology, wedge_covered_vectors(wedge, built.topology.vector_count)
                )
                if any(covered[e] < c for e, c in active.items()):
                    failures.append(f"case {i} W={width} vpg={vpg}: covered set misses active edges")
                if width == 1 and vpg == 1 and covered != active:
                    failures.append(f"case {i}: finest grain not exact")
        if failures:
            break
    report(2, failures, f"{CORPUS_SIZE} cases, all W x vpg")


def test_criterion_3_superfluous_work_bound(corpus):
    failures: list[str] = []
    for i, case in enumerate(corpus):
        active_total = sum(oracles.active_edge_multiset(case.edges, case.frontier_members).values())
        for width, built, frontier, _ in _coverage_cases(case):
            for vpg in PRECISIONS:
                wedge = transform_frontier(frontier, built.index, FrontierPrecision(vpg))
                covered_total = sum(
                    oracles.covered_edge_multiset(
                        built.topology, wedge_covered_vectors(wedge, built.topology.vector_count)
                    ).values()
                )
                bits = wedge.set_bit_count()
                if covered_total > bits * vpg * width:
                    failures.append(f"case {i} W={width} vpg={vpg}: capacity bound broken")
                if covered_total - active_total > bits * (vpg * width - 1):
                    failures.append(f"case {i} W={width} vpg={vpg}: excess bound broken")
        if failures:
            break
    report(3, failures, "covered <= bits*vpg*W and excess <= bits*(vpg*W-1)")


def test_criterion_4_precision_monotonicity(corpus):
    failures: list[str] = []
    for i, case in enumerate(corpus):
        for width, built, frontier, _ in _coverage_cases(case):
            prev_covered: set | None = None
            prev_bits = None
            for vpg in PRECISIONS:
                wedge = transform_frontier(frontier, built.index, FrontierPrecision(vpg))
                covered = set(wedge_covered_vectors(wedge, built.topology.vector_count).tolist())
                bits = wedge.set_bit_count()
                if prev_covered is not None and not prev_covered <= covered:
                    failures.append(f"case {i} W={width} vpg={vpg}: covered sets not nested")
                if prev_bits is not None and bits > prev_bits:
                    failures.append(f"case {i} W={width} vpg={vpg}: set-bit count grew")
                prev_covered, prev_bits = covered, bits
        if failures:
            break
    report(4, failures, "nested covered sets, non-increasing bit counts")


def test_criterion_5_transform_work_accounting(corpus):
    failures: list[str] = []
    for i, case in enumerate(corpus):
        built = build_graph(case.edges, case.n, 2)
        frontier = VertexFrontier.from_vertices(case.frontier_members, built.degrees, case.n)
        for vpg in (1, 4):
            wedge = transform_frontier(frontier, built.index, FrontierPrecision(vpg))
            recount = sum(
                int(built.index.offsets[v + 1] - built.index.offsets[v]) for v in case.frontier_members
            )
            if wedge.entries_visited != recount:
                failures.append(f"case {i} vpg={vpg}: counter {wedge.entries_visited} != recount {recount}")
            if wedge.entries_visited > case.n + len(case.edges):
                failures.append(f"case {i}: counter exceeds |V|+|E|")
        if failures:
            break
    report(5, failures, "visited-entry counter exact on every case")


def test_criterion_6_threshold_semantics(corpus):
    failures: list[str] = []
    thresholds = ("0", "0.1", "0.2", "0.5", "1")
    for i, case in enumerate(corpus[:20]):
        for app, edges, n, make in _app_inputs(case):
            built = build_graph(edges, n, 4)
            total = built.edges.edge_count
            for t in thresholds:
                threshold = FullnessThreshold.of(t)
                result = run_until_convergence(
                    built.topology, built.index, make(), built.degrees, _run_config(t, 4)
                )
                for stats in result.stats:
                    probe = VertexFrontier.empty(n)
                    probe.member_edge_sum = stats.active_edges
                    expected = "Wedge" if should_transform(probe, total, threshold) else "FullScan"
                    if stats.mode != expected:
                        failures.append(f"case {i} {app} t={t} iter {stats.iteration}: mode mismatch")
                if t == "0" and any(s.mode == "Wedge" for s in result.stats):
                    failures.append(f"case {i} {app}: t=0 produced a Wedge iteration")
                if t == "1":
                    for stats in result.stats:
                        if stats.active_edges < total and stats.mode != "Wedge":
                            failures.append(f"case {i} {app}: t=1 skipped a possible Wedge iteration")
        if failures:
            break
    report(6, failures, "mode sequence == offline replay; extremes behave")


@pytest.fixture(scope="module")
def rmat14():
    edges = generate(GenSpec("rmat", scale=14, edge_factor=16, seed=1))
    return build_graph(list(edges.edges()), edges.vertex_count, width=4)


def test_criterion_7_work_reduction_sparse_frontiers(rmat14):
    started = time.perf_counter()
    built = rmat14
    result = run_until_convergence(
        built.topology, built.index, bfs_program(0), built.degrees,
        EngineConfig(threshold=FullnessThreshold.of("0.01"), precision=FrontierPrecision(8),
                     max_iterations=100_000),
    )
    elapsed = time.perf_counter() - started
    failures: list[str] = []
    if not result.converged:
        failures.append("BFS did not converge")
    total_vectors = built.topology.vector_count
    wedge_touched = sum(s.vectors_touched for s in result.stats if s.mode == "Wedge")
    budget = 0.5 * result.iterations * total_vectors
    if not wedge_touched < budget:
        failures.append(f"wedge touched {wedge_touched} >= 50% budget {budget}")
    for stats in result.stats:
        if stats.mode == "Wedge" and stats.vectors_touched > stats.covered_vectors:
            failures.append(f"iteration {stats.iteration} touched more than covered")
    if elapsed >= 30:
        failures.append(f"runtime {elapsed:.1f}s exceeds 30s budget")
    report(
        7,
        failures,
        f"{result.iterations} iters, wedge touched {wedge_touched}/{result.iterations * total_vectors}, {elapsed:.2f}s",
    )


def test_criterion_8_parallel_determinism():
    edges = generate(GenSpec("rmat", scale=12, edge_factor=16, seed=1))
    failures: list[str] = []
    for app in ("bfs", "cc", "sssp"):
        el = edges
        if app == "cc":
            el = symmetrize(el)
        if app == "sssp":
            el = synthesize_weights(el, 128)
        built = build_graph(list(el.edges()), el.vertex_count, width=4)
        program = make_program(app, 0 if app != "cc" else None)
        baseline = None
        for workers in (1, 2, 4, 8):
            cfg = EngineConfig(
                threshold=FullnessThreshold.of("0.2"),
                precision=FrontierPrecision(4),
                workers=workers,
                max_iterations=100_000,
            )
            result = run_until_convergence(built.topology, built.index, program, built.degrees, cfg)
            signature = (result_digest(result.values), stats_signature(result.stats))
            if baseline is None:
                baseline = signature
            elif signature != baseline:
                failures.append(f"{app}: workers={workers} changed digest or stats")
    report(8, failures, "digest and stats stable for workers in {1,2,4,8} on rmat scale 12")


def test_criterion_9_application_properties(corpus):
    failures: list[str] = []

    # BFS single activation + CC monotonicity on the corpus
    for i, case in enumerate(corpus[:40]):
        built = build_graph(case.edges, case.n, 2)
        frontiers: list = []
        run_until_convergence(
            built.topology, built.index, bfs_program(case.root), built.degrees,
            _run_config(1, 2), frontier_log=frontiers,
        )
        seen = [v for f in frontiers for v in f.tolist()]
        if len(seen) != len(set(seen)):
            failures.append(f"case {i}: BFS re-activated a vertex")

        sym = build_graph(case.sym_edges, case.n, 2)
        values_log: list = []
        cc = run_until_convergence(
            sym.topology, sym.index, cc_program(), sym.degrees, _run_config("0.2", 4),
            value_log=values_log,
        )
        trajectory = [np.arange(case.n)] + values_log
        for before, after in zip(trajectory, trajectory[1:]):
            if not np.all(np.asarray(after) <= np.asarray(before)):
                failures.append(f"case {i}: CC labels increased")
                break
        if cc.values.tolist() != oracles.min_label_components(case.edges, case.n):
            failures.append(f"case {i}: CC fixpoint wrong")
        if failures:
            break

    # SSSP against Dijkstra up to 10k edges
    big = generate(GenSpec("rmat", scale=10, edge_factor=8, seed=3))
    weighted = synthesize_weights(big, 64)
    built = build_graph(list(weighted.edges()), weighted.vertex_count, width=4)
    result = run_until_convergence(
        built.topology, built.index, sssp_program(0), built.degrees, _run_config("0.2", 4)
    )
    expected = oracles.dijkstra(list(weighted.edges()), weighted.vertex_count, 0)
    if result.values.tolist() != expected:
        failures.append("SSSP != Dijkstra on 8192-edge graph")

    report(9, failures, "BFS one-shot, CC monotone fixpoint, SSSP == Dijkstra")


def test_criterion_10_cli_contract(capsys, tmp_path):
    from wedgegraph.cli import CSV_HEADER, main

    failures: list[str] = []

    code = main(["run", "--app", "bfs", "--gen", "rmat:14:16", "--seed", "1", "--root", "0"])
    out = capsys.readouterr().out
    lines = out.strip().splitlines()
    if code != 0:
        failures.append(f"criterion-7 run exited {code}")
    if lines[0] != CSV_HEADER:
        failures.append("CSV header mismatch")
    for row in lines[1:]:
        fields = row.split(",")
        if len(fields) != 7:
            failures.append(f"row has {len(fields)} fields")
            break
        int(fields[0]); float(fields[2]); float(fields[3]); float(fields[4])
        int(fields[5]); int(fields[6])
        if fields[1] not in ("FullScan", "Wedge"):
            failures.append(f"unexpected mode {fields[1]}")
            break

    code = main(["run", "--app", "bfs", "--gen", "path:32", "--root", "0", "--max-iters", "3"])
    capsys.readouterr()
    if code != 2:
        failures.append(f"max-iters run exited {code}, expected 2")

    code = main(["run", "--app", "nope", "--gen", "path:4"])
    capsys.readouterr()
    if code != 1:
        failures.append(f"usage error exited {code}, expected 1")

    code = main(["run", "--app", "cc", "--graph", str(tmp_path / "missing.el")])
    capsys.readouterr()
    if code != 1:
        failures.append(f"missing input exited {code}, expected 1")

    report(10, failures, "schema-exact CSV; exit codes 0/2/1")
