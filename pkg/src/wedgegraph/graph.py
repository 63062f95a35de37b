"""Immutable graph representations.

Four structures are built from a raw edge list:

* ``PullTopology`` — in-edges grouped by destination and packed into
  fixed-width vectors whose lanes carry the source id (and weight); the
  destination id is embedded per vector, so a scan of the vector array alone
  identifies both endpoints of every edge.
* ``PushTopology`` — plain CSR over out-edges, used by the reference engine.
* out-degree table — one count per vertex, drives frontier fullness sums.
* ``EdgeIndex`` — CSR mapping each source vertex to the pull-topology vector
  positions holding its out-edges; consumed by the frontier transformation.

Construction is single-threaded; everything is read-only afterwards and safe
to share across worker threads.
"""

from __future__ import annotations

from typing import Iterator

import numpy as np

OutDegrees = np.ndarray  # int64, one entry per vertex, sums to edge_count


def _as_id_array(values, vertex_count: int, what: str) -> np.ndarray:
    arr = np.ascontiguousarray(values, dtype=np.int64)
    if arr.size:
        lo, hi = int(arr.min()), int(arr.max())
        if lo < 0 or hi >= vertex_count:
            raise ValueError(f"{what} id out of range [0, {vertex_count})")
    return arr


class EdgeList:
    """Raw directed edges over a dense vertex id space.

    Either every edge carries a positive integer weight or none do.
    Duplicate edges and self-loops are legal and processed like any edge.
    """

    __slots__ = ("vertex_count", "src", "dst", "weight")

    def __init__(self, vertex_count: int, src, dst, weight=None):
        if vertex_count < 0:
            raise ValueError("vertex_count must be non-negative")
        self.vertex_count = int(vertex_count)
        self.src = _as_id_array(src, vertex_count, "source")
        self.dst = _as_id_array(dst, vertex_count, "destination")
        if self.src.shape != self.dst.shape:
            raise ValueError("src/dst arrays differ in length")
        if weight is None:
            self.weight = None
        else:
            w = np.ascontiguousarray(weight, dtype=np.int64)
            if w.shape != self.src.shape:
                raise ValueError("weight array length mismatch")
            if w.size and w.min() < 1:
                raise ValueError("edge weights must be positive")
            self.weight = w

    @classmethod
    def from_pairs(cls, pairs, vertex_count: int | None = None) -> "EdgeList":
        """Build from ``(src, dst)`` or ``(src, dst, weight)`` tuples."""
        pairs = list(pairs)
        if pairs and len(pairs[0]) == 3:
            src, dst, wgt = zip(*pairs)
        else:
            src, dst = zip(*pairs) if pairs else ((), ())
            wgt = None
        if vertex_count is None:
            vertex_count = int(max(max(src, default=-1), max(dst, default=-1)) + 1)
        return cls(vertex_count, src, dst, wgt)

    @property
    def edge_count(self) -> int:
        return int(self.src.shape[0])

    def is_weighted(self) -> bool:
        return self.weight is not None

    def edges(self) -> Iterator[tuple]:
        if self.weight is None:
            yield from zip(self.src.tolist(), self.dst.tolist())
        else:
            yield from zip(self.src.tolist(), self.dst.tolist(), self.weight.tolist())

    def __len__(self) -> int:
        return self.edge_count

    def __eq__(self, other) -> bool:
        if not isinstance(other, EdgeList):
            return NotImplemented
        if self.vertex_count != other.vertex_count:
            return False
        if (self.weight is None) != (other.weight is None):
            return False
        same = np.array_equal(self.src, other.src) and np.array_equal(self.dst, other.dst)
        if same and self.weight is not None:
            same = np.array_equal(self.weight, other.weight)
        return bool(same)

    def __repr__(self) -> str:
        kind = "weighted" if self.weight is not None else "unweighted"
        return f"EdgeList(|V|={self.vertex_count}, |E|={self.edge_count}, {kind})"


class PullTopology:
    """Destination-grouped, vector-packed in-edge structure.

    ``vec_dst[p]`` is the destination shared by all lanes of vector ``p``;
    lanes ``[0, lane_count[p])`` of ``lane_src[p]`` / ``lane_weight[p]`` are
    valid, the rest is padding. Vectors are ordered by (dst, src) ascending
    and, per destination, only the last vector may be partially filled.
    """

    __slots__ = (
        "vertex_count",
        "vector_width",
        "edge_count",
        "vec_dst",
        "lane_src",
        "lane_weight",
        "lane_count",
        "_lane_valid",
    )

    def __init__(self, vertex_count, vector_width, edge_count, vec_dst, lane_src, lane_weight, lane_count):
        self.vertex_count = vertex_count
        self.vector_width = vector_width
        self.edge_count = edge_count
        self.vec_dst = vec_dst
        self.lane_src = lane_src
        self.lane_weight = lane_weight
        self.lane_count = lane_count
        self._lane_valid = None

    @property
    def vector_count(self) -> int:
        return int(self.vec_dst.shape[0])

    def is_weighted(self) -> bool:
        return self.lane_weight is not None

    def lane_valid(self) -> np.ndarray:
        """Boolean [vector_count, W] mask of valid lanes (cached)."""
        if self._lane_valid is None:
            self._lane_valid = self.lane_count[:, None] > np.arange(self.vector_width)[None, :]
        return self._lane_valid

    def lanes(self) -> Iterator[tuple]:
        """Yield (position, src, dst, weight) for every valid lane, in scan order."""
        for p in range(self.vector_count):
            d = int(self.vec_dst[p])
            for k in range(int(self.lane_count[p])):
                w = int(self.lane_weight[p, k]) if self.lane_weight is not None else None
                yield p, int(self.lane_src[p, k]), d, w

    def __repr__(self) -> str:
        return (
            f"PullTopology(|V|={self.vertex_count}, |E|={self.edge_count}, "
            f"vectors={self.vector_count}, W={self.vector_width})"
        )


class PushTopology:
    """CSR over out-edges: ``neighbors[offsets[v]:offsets[v+1]]`` are v's
    destinations, ascending."""

    __slots__ = ("vertex_count", "offsets", "neighbors", "weights")

    def __init__(self, vertex_count, offsets, neighbors, weights=None):
        self.vertex_count = vertex_count
        self.offsets = offsets
        self.neighbors = neighbors
        self.weights = weights

    @property
    def edge_count(self) -> int:
        return int(self.offsets[-1]) if len(self.offsets) else 0

    def is_weighted(self) -> bool:
        return self.weights is not None

    def __repr__(self) -> str:
        return f"PushTopology(|V|={self.vertex_count}, |E|={self.edge_count})"


class EdgeIndex:
    """Per-source lists of pull-topology vector positions, CSR layout.

    ``positions[offsets[v]:offsets[v+1]]`` are the vector positions holding
    v's out-edge lanes, ascending, duplicates removed. Positions are stored
    at single-vector granularity; coarser edge groups are obtained at
    transform time by a right shift, so the index never needs rebuilding
    when the frontier precision changes.
    """

    __slots__ = ("vertex_count", "vector_count", "offsets", "positions")

    def __init__(self, vertex_count, vector_count, offsets, positions):
        self.vertex_count = vertex_count
        self.vector_count = vector_count
        self.offsets = offsets
        self.positions = positions

    def positions_for(self, v: int) -> np.ndarray:
        return self.positions[self.offsets[v] : self.offsets[v + 1]]

    def __repr__(self) -> str:
        return f"EdgeIndex(|V|={self.vertex_count}, entries={len(self.positions)})"


def _check_vector_width(width: int) -> None:
    if width < 1 or (width & (width - 1)) != 0:
        raise ValueError(f"vector width must be a power of two >= 1, got {width}")


def build_pull_topology(edges: EdgeList, vector_width: int = 4) -> PullTopology:
    """Group in-edges by destination and pack them into fixed-width vectors."""
    _check_vector_width(vector_width)
    n, m, w = edges.vertex_count, edges.edge_count, vector_width
    if m == 0:
        return PullTopology(
            n,
            w,
            0,
            np.empty(0, dtype=np.int64),
            np.empty((0, w), dtype=np.int64),
            np.empty((0, w), dtype=np.int64) if edges.is_weighted() else None,
            np.empty(0, dtype=np.int64),
        )

    order = np.lexsort((edges.src, edges.dst))
    dst = edges.dst[order]
    src = edges.src[order]
    wgt = edges.weight[order] if edges.weight is not None else None

    uniq_dst, counts = np.unique(dst, return_counts=True)
    vecs_per_dst = (counts + w - 1) // w
    vec_base = np.concatenate(([0], np.cumsum(vecs_per_dst)))
    nvec = int(vec_base[-1])

    group_starts = np.concatenate(([0], np.cumsum(counts)))[:-1]
    group_of_edge = np.repeat(np.arange(len(uniq_dst)), counts)
    rank = np.arange(m) - group_starts[group_of_edge]
    vec_of_edge = vec_base[group_of_edge] + rank // w
    lane_of_edge = rank % w

    vec_dst = np.repeat(uniq_dst, vecs_per_dst)
    lane_src = np.zeros((nvec, w), dtype=np.int64)
    lane_src[vec_of_edge, lane_of_edge] = src
    lane_weight = None
    if wgt is not None:
        lane_weight = np.zeros((nvec, w), dtype=np.int64)
        lane_weight[vec_of_edge, lane_of_edge] = wgt

    lane_count = np.full(nvec, w, dtype=np.int64)
    last_vec = vec_base[1:] - 1
    lane_count[last_vec] = counts - (vecs_per_dst - 1) * w

    return PullTopology(n, w, m, np.ascontiguousarray(vec_dst), lane_src, lane_weight, lane_count)


def build_push_topology(edges: EdgeList) -> PushTopology:
    """CSR over out-edges, destinations ascending within each source."""
    n = edges.vertex_count
    order = np.lexsort((edges.dst, edges.src))
    neighbors = np.ascontiguousarray(edges.dst[order])
    weights = np.ascontiguousarray(edges.weight[order]) if edges.weight is not None else None
    counts = np.bincount(edges.src, minlength=n) if edges.edge_count else np.zeros(n, dtype=np.int64)
    offsets = np.concatenate(([0], np.cumsum(counts))).astype(np.int64)
    return PushTopology(n, offsets, neighbors, weights)


def compute_out_degrees(edges: EdgeList) -> OutDegrees:
    if edges.edge_count == 0:
        return np.zeros(edges.vertex_count, dtype=np.int64)
    return np.bincount(edges.src, minlength=edges.vertex_count).astype(np.int64)


def build_edge_index(topology: PullTopology) -> EdgeIndex:
    """Map each source vertex to the vector positions holding its out-edges."""
    n, nvec, w = topology.vertex_count, topology.vector_count, topology.vector_width
    if topology.edge_count == 0:
        return EdgeIndex(n, nvec, np.zeros(n + 1, dtype=np.int64), np.empty(0, dtype=np.int64))

    valid = topology.lane_valid()
    srcs = topology.lane_src[valid]
    vecs = np.repeat(np.arange(nvec, dtype=np.int64), topology.lane_count)

    order = np.lexsort((vecs, srcs))
    srcs, vecs = srcs[order], vecs[order]
    keep = np.ones(len(srcs), dtype=bool)
    keep[1:] = (srcs[1:] != srcs[:-1]) | (vecs[1:] != vecs[:-1])
    srcs, vecs = srcs[keep], vecs[keep]

    counts = np.bincount(srcs, minlength=n)
    offsets = np.concatenate(([0], np.cumsum(counts))).astype(np.int64)
    return EdgeIndex(n, nvec, offsets, np.ascontiguousarray(vecs))
