"""Push-based reference engine.

Traverses the out-edge CSR for every frontier member and aggregates messages
at the destinations, then applies once per touched destination. Under the
same double-buffering discipline this produces values and output frontiers
identical to the pull engine, which makes it the correctness oracle and the
work-count baseline: ``edges_touched`` is exactly the frontier's out-degree
sum. Single-threaded by design.
"""

from __future__ import annotations

from fractions import Fraction
from time import perf_counter

import numpy as np

from .engine import (
    UNREACHED,
    ApplicationProgram,
    PushIterationStats,
    RunResult,
    ValueBuffers,
    _check_buffers,
    _copy_forward,
)
from .frontier import VertexFrontier
from .graph import OutDegrees, PushTopology


def _kernel_push(topology, members, prev, nxt, kern):
    """Vectorized push step for min-plus programs; returns activated ids."""
    offsets, neighbors = topology.offsets, topology.neighbors
    starts = offsets[members]
    lens = offsets[members + 1] - starts
    total = int(lens.sum())
    if total == 0:
        return np.empty(0, dtype=np.int64)
    rep = np.repeat(np.arange(len(members)), lens)
    flat = starts[rep] + (np.arange(total, dtype=np.int64) - np.repeat(np.cumsum(lens) - lens, lens))
    dsts = neighbors[flat]
    msgs = prev[members[rep]]
    if kern.use_weight:
        msgs = msgs + topology.weights[flat]

    agg = np.full(len(prev), UNREACHED, dtype=np.int64)
    np.minimum.at(agg, dsts, msgs)
    touched = np.zeros(len(prev), dtype=bool)
    touched[dsts] = True

    cand = agg + kern.apply_increment
    upd = touched & (cand < prev)
    if kern.filter_unvisited:
        upd &= prev == UNREACHED
    ids = np.nonzero(upd)[0]
    if ids.size:
        nxt[ids] = cand[ids]
    return ids.astype(np.int64)


def _generic_push(topology, members, prev, nxt, program):
    """Reference push step for arbitrary programs; returns activated ids."""
    offsets, neighbors, weights = topology.offsets, topology.neighbors, topology.weights
    agg: dict[int, object] = {}
    for s in members:
        s = int(s)
        value = prev[s]
        for k in range(int(offsets[s]), int(offsets[s + 1])):
            d = int(neighbors[k])
            w = int(weights[k]) if weights is not None else None
            msg = program.gather(value, w)
            agg[d] = msg if d not in agg else program.combine(agg[d], msg)
    activated = []
    for d in sorted(agg):
        if not program.should_process(prev[d]):
            continue
        new, activate = program.apply(prev[d], agg[d])
        nxt[d] = new
        if activate:
            activated.append(d)
    return np.asarray(activated, dtype=np.int64)


def run_iteration_push(
    topology: PushTopology,
    frontier: VertexFrontier,
    buffers: ValueBuffers,
    program: ApplicationProgram,
    degrees: OutDegrees,
) -> tuple[VertexFrontier, PushIterationStats]:
    """One push iteration over the frontier members' out-edges."""
    n = topology.vertex_count
    _check_buffers(buffers, n)
    if frontier.vertex_count != n:
        raise ValueError(f"frontier covers {frontier.vertex_count} vertices, topology has {n}")
    if program.needs_weights and not topology.is_weighted():
        raise ValueError(f"program {program.name!r} requires edge weights")

    prev, nxt = buffers.previous, buffers.next
    _copy_forward(prev, nxt)
    members = frontier.members()

    start = perf_counter()
    if program.kernel is not None and members.size:
        ids = _kernel_push(topology, members, prev, nxt, program.kernel)
    elif members.size:
        ids = _generic_push(topology, members, prev, nxt, program)
    else:
        ids = np.empty(0, dtype=np.int64)
    pull_time = perf_counter() - start

    out = VertexFrontier.from_vertices(ids, degrees, n)
    stats = PushIterationStats(
        pull_time=pull_time,
        edges_touched=frontier.member_edge_sum,
        frontier_out_size=int(ids.size),
    )
    return out, stats


def run_until_convergence_push(
    topology: PushTopology,
    program: ApplicationProgram,
    degrees: OutDegrees,
    max_iterations: int = 1_000_000,
    frontier_log: list | None = None,
    value_log: list | None = None,
) -> RunResult:
    """Frontier-driven push loop with the same termination rule as the pull engine."""
    n = topology.vertex_count
    buffers = ValueBuffers.initialize(program, n)
    frontier = VertexFrontier.from_vertices(program.initial_frontier(n), degrees, n)
    total_edges = int(degrees.sum())

    # Same do-while discipline as the pull driver: at least one iteration,
    # stop once the produced frontier has no out-edges.
    stats_list: list[PushIterationStats] = []
    converged = False
    while not converged and len(stats_list) < max_iterations:
        in_edges = frontier.member_edge_sum
        frontier, stats = run_iteration_push(topology, frontier, buffers, program, degrees)
        stats.iteration = len(stats_list) + 1
        stats.active_edges = in_edges
        stats.active_edge_fraction = Fraction(in_edges, total_edges) if total_edges else Fraction(0)
        buffers.swap()
        stats_list.append(stats)
        if frontier_log is not None:
            frontier_log.append(frontier.members())
        if value_log is not None:
            snapshot = buffers.previous
            value_log.append(snapshot.copy() if isinstance(snapshot, np.ndarray) else list(snapshot))
        converged = frontier.member_edge_sum == 0

    return RunResult(values=buffers.previous, stats=stats_list, converged=converged)
