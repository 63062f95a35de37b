"""Pull-only iteration engine.

Each iteration reads vertex values from the previous buffer and writes each
destination's new value exactly once into the next buffer (strict double
buffering, synchronous model). Destinations with no contributing in-edges
keep their previous value. Applications are expressed as a
gather/combine/apply program; combine must be associative and commutative
so that lane packing, group coarsening, and parallel partitioning cannot
change results.

The convergence driver decides per iteration whether to transform the
produced vertex frontier into a wedge frontier (sparse case) or to run the
next iteration as a full scan (dense case), and stops once the produced
frontier has no out-edges left to propagate.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from fractions import Fraction
from time import perf_counter
from typing import Any, Callable, Optional, Sequence

import numpy as np

from .bitmask import Bitmask, set_bits
from .frontier import (
    DEFAULT_SLICE_SIZE,
    FrontierPrecision,
    FullnessThreshold,
    VertexFrontier,
    WedgeFrontier,
    should_transform,
    transform_frontier,
    wedge_covered_vectors,
)
from .graph import EdgeIndex, OutDegrees, PullTopology
from .kernels import get_backend

#: Sentinel for "no value yet": large enough that sentinel + weight + 1 never
#: overflows int64 and never beats a real candidate in a min.
UNREACHED = 1 << 62

MODE_FULL = "FullScan"
MODE_WEDGE = "Wedge"
MODE_PUSH = "Push"


@dataclass(frozen=True)
class MinPlusKernel:
    """Parameters placing a program in the compiled integer min-plus family.

    Messages are ``prev[src]`` (plus the lane weight when ``use_weight``),
    combined by minimum; a destination whose previous value passes the
    unvisited filter is updated to ``min_message + apply_increment`` iff that
    candidate is strictly smaller, and activated on update. Values must
    never exceed ``UNREACHED``.
    """

    filter_unvisited: bool
    use_weight: bool
    apply_increment: int


@dataclass(frozen=True)
class ApplicationProgram:
    """Gather/combine/apply contract plus initial state.

    ``combine`` must be associative and commutative, ``apply(old, None)``
    must return ``(old, False)``, and programs must tolerate messages from
    sources outside the active subset (coarse frontiers may deliver them).
    ``kernel`` being set routes iterations through the compiled/vectorized
    min-plus path; the callables define identical semantics and are used by
    the generic path and the push reference.
    """

    name: str
    initial_value: Callable[[int], Any]
    initial_frontier: Callable[[int], Sequence[int]]
    gather: Callable[[Any, Any], Any]
    combine: Callable[[Any, Any], Any]
    apply: Callable[[Any, Any], tuple[Any, bool]]
    should_process: Callable[[Any], bool] = lambda value: True
    needs_weights: bool = False
    kernel: Optional[MinPlusKernel] = None
    initial_values: Optional[Callable[[int], np.ndarray]] = None


class ValueBuffers:
    """Double buffer of per-vertex values: read previous, write next."""

    __slots__ = ("previous", "next")

    def __init__(self, previous, next):
        self.previous = previous
        self.next = next

    @classmethod
    def initialize(cls, program: ApplicationProgram, vertex_count: int) -> "ValueBuffers":
        if program.initial_values is not None:
            prev = np.ascontiguousarray(program.initial_values(vertex_count), dtype=np.int64)
        elif program.kernel is not None:
            prev = np.fromiter(
                (program.initial_value(v) for v in range(vertex_count)), dtype=np.int64, count=vertex_count
            )
        else:
            prev = [program.initial_value(v) for v in range(vertex_count)]
        nxt = prev.copy() if isinstance(prev, np.ndarray) else list(prev)
        return cls(prev, nxt)

    def swap(self) -> None:
        self.previous, self.next = self.next, self.previous

    def __len__(self) -> int:
        return len(self.previous)


@dataclass
class IterationStats:
    mode: str
    pull_time: float
    vectors_touched: int
    frontier_out_size: int
    iteration: int = 0
    transform_time: float = 0.0
    active_edges: int = 0
    active_edge_fraction: Fraction | None = None
    covered_vectors: int = 0
    transform_entries: int = 0


@dataclass
class PushIterationStats:
    pull_time: float
    edges_touched: int
    frontier_out_size: int
    mode: str = MODE_PUSH
    iteration: int = 0
    transform_time: float = 0.0
    active_edges: int = 0
    active_edge_fraction: Fraction | None = None


@dataclass(frozen=True)
class EngineConfig:
    threshold: FullnessThreshold = FullnessThreshold(Fraction(1, 5))
    precision: FrontierPrecision = FrontierPrecision(4)
    workers: int = 1
    slice_size: int = DEFAULT_SLICE_SIZE
    max_iterations: int = 1_000_000

    def __post_init__(self):
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.slice_size < 1:
            raise ValueError("slice_size must be >= 1")


@dataclass
class RunResult:
    values: Any
    stats: list
    converged: bool

    @property
    def iterations(self) -> int:
        return len(self.stats)


def result_digest(values) -> str:
    """64-bit checksum of final vertex values, stable across engines and workers."""
    arr = np.ascontiguousarray(np.asarray(values, dtype=np.int64), dtype="<i8")
    return hashlib.blake2b(arr.tobytes(), digest_size=8).hexdigest()


def stats_signature(stats: Sequence) -> tuple:
    """Per-iteration stats with timing fields stripped, for determinism checks."""
    rows = []
    for s in stats:
        work = s.vectors_touched if isinstance(s, IterationStats) else s.edges_touched
        rows.append((s.iteration, s.mode, s.active_edges, work, s.frontier_out_size))
    return tuple(rows)


def _check_buffers(buffers: ValueBuffers, vertex_count: int) -> None:
    if len(buffers.previous) != vertex_count or len(buffers.next) != vertex_count:
        raise ValueError(f"value buffers must have length {vertex_count}")


def _check_weights(topology: PullTopology, program: ApplicationProgram) -> None:
    if program.needs_weights and not topology.is_weighted():
        raise ValueError(f"program {program.name!r} requires edge weights")


def _copy_forward(prev, nxt) -> None:
    if isinstance(nxt, np.ndarray):
        np.copyto(nxt, prev)
    else:
        nxt[:] = prev


def _generic_pull(topology: PullTopology, positions, prev, nxt, program: ApplicationProgram):
    """Reference scan for arbitrary programs; positions None means all vectors.

    Positions are visited ascending; destinations are non-decreasing along
    positions, so equal-destination runs aggregate once and apply once.
    """
    vec_dst, lane_src = topology.vec_dst, topology.lane_src
    lane_wgt, lane_count = topology.lane_weight, topology.lane_count
    seq = range(topology.vector_count) if positions is None else [int(p) for p in positions]
    touched = 0
    activated: list[int] = []
    applied: set[int] = set()

    k, total = 0, len(seq)
    while k < total:
        p = seq[k]
        d = int(vec_dst[p])
        run = [p]
        k += 1
        while k < total and int(vec_dst[seq[k]]) == d:
            run.append(seq[k])
            k += 1
        if not program.should_process(prev[d]):
            continue
        agg = None
        for q in run:
            for lane in range(int(lane_count[q])):
                w = int(lane_wgt[q, lane]) if lane_wgt is not None else None
                msg = program.gather(prev[int(lane_src[q, lane])], w)
                agg = msg if agg is None else program.combine(agg, msg)
            touched += 1
        new, activate = program.apply(prev[d], agg)
        assert d not in applied, "destination applied twice in one iteration"
        applied.add(d)
        nxt[d] = new
        if activate:
            activated.append(d)
    return touched, activated


def _finish_iteration(out: Bitmask, degrees: OutDegrees) -> tuple[VertexFrontier, int]:
    members = out.indices()
    edge_sum = int(degrees[members].sum()) if members.size else 0
    return VertexFrontier(out, edge_sum), int(members.size)


def run_iteration_full(
    topology: PullTopology,
    buffers: ValueBuffers,
    program: ApplicationProgram,
    degrees: OutDegrees,
    workers: int = 1,
    backend=None,
) -> tuple[VertexFrontier, IterationStats]:
    """One pull iteration over the entire graph (no frontier consumed)."""
    n = topology.vertex_count
    _check_buffers(buffers, n)
    _check_weights(topology, program)
    prev, nxt = buffers.previous, buffers.next
    _copy_forward(prev, nxt)
    out = Bitmask(n)

    start = perf_counter()
    if program.kernel is not None:
        touched = get_backend(backend).pull_full(
            topology, prev, nxt, out.words, program.kernel, UNREACHED, workers
        )
    else:
        touched, ids = _generic_pull(topology, None, prev, nxt, program)
        set_bits(out.words, np.asarray(ids, dtype=np.int64))
    pull_time = perf_counter() - start

    frontier, out_size = _finish_iteration(out, degrees)
    stats = IterationStats(MODE_FULL, pull_time, int(touched), out_size)
    return frontier, stats


def run_iteration_wedge(
    topology: PullTopology,
    wedge: WedgeFrontier,
    buffers: ValueBuffers,
    program: ApplicationProgram,
    degrees: OutDegrees,
    workers: int = 1,
    backend=None,
) -> tuple[VertexFrontier, IterationStats]:
    """One pull iteration restricted to the vectors covered by the wedge frontier."""
    n = topology.vertex_count
    _check_buffers(buffers, n)
    _check_weights(topology, program)
    if wedge.vector_count != topology.vector_count:
        raise ValueError(
            f"wedge frontier built for {wedge.vector_count} vectors, topology has {topology.vector_count}"
        )
    prev, nxt = buffers.previous, buffers.next
    _copy_forward(prev, nxt)
    out = Bitmask(n)

    start = perf_counter()
    if program.kernel is not None:
        touched = get_backend(backend).pull_wedge(
            topology,
            wedge.bits.words,
            wedge.precision.shift,
            wedge.group_count,
            prev,
            nxt,
            out.words,
            program.kernel,
            UNREACHED,
            workers,
        )
    else:
        positions = wedge_covered_vectors(wedge, topology.vector_count)
        touched, ids = _generic_pull(topology, positions, prev, nxt, program)
        set_bits(out.words, np.asarray(ids, dtype=np.int64))
    pull_time = perf_counter() - start

    frontier, out_size = _finish_iteration(out, degrees)
    stats = IterationStats(MODE_WEDGE, pull_time, int(touched), out_size)
    stats.covered_vectors = wedge.covered_vector_count()
    stats.transform_entries = wedge.entries_visited
    return frontier, stats


def run_until_convergence(
    topology: PullTopology,
    index: EdgeIndex,
    program: ApplicationProgram,
    degrees: OutDegrees,
    config: EngineConfig,
    backend=None,
    frontier_log: list | None = None,
    value_log: list | None = None,
) -> RunResult:
    """Drive iterations until the produced frontier has no out-edges, or give up.

    Per iteration: if the current frontier is sparse enough per the fullness
    threshold, transform it and run a wedge iteration; otherwise run a full
    scan. ``frontier_log``/``value_log`` collect per-iteration output
    frontier members and value snapshots when provided.
    """
    n = topology.vertex_count
    if index.vertex_count != n or index.vector_count != topology.vector_count:
        raise ValueError("edge index does not match topology")
    _check_weights(topology, program)

    buffers = ValueBuffers.initialize(program, n)
    frontier = VertexFrontier.from_vertices(program.initial_frontier(n), degrees, n)
    total_edges = topology.edge_count

    # At least one iteration always runs; afterwards the loop stops as soon
    # as the produced frontier has no out-edges left to propagate.
    stats_list: list[IterationStats] = []
    converged = False
    while not converged and len(stats_list) < config.max_iterations:
        in_edges = frontier.member_edge_sum
        if total_edges > 0 and should_transform(frontier, total_edges, config.threshold):
            start = perf_counter()
            wedge = transform_frontier(
                frontier, index, config.precision, config.slice_size, config.workers, backend
            )
            transform_time = perf_counter() - start
            frontier, stats = run_iteration_wedge(
                topology, wedge, buffers, program, degrees, config.workers, backend
            )
            stats.transform_time = transform_time
        else:
            frontier, stats = run_iteration_full(
                topology, buffers, program, degrees, config.workers, backend
            )
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
