"""Frontier data structures and the frontier transformation.

The traditional frontier is a dense vertex bitmask plus a running sum of the
members' out-degrees; insertion stays vertex-based and source-oriented. The
wedge frontier is a dense bitmask over edge-vector groups in the pull
topology: a set bit marks every vector of its group as eligible for
processing, so traversal is destination-oriented and per-group waste is
bounded by the group capacity rather than any vertex's in-degree.

The transformation walks the edge index for every frontier member and sets
the group bit of each listed vector position. It is executed selectively:
``should_transform`` compares the frontier's out-degree sum against a
fullness threshold, with ties falling to the full-scan path.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .bitmask import Bitmask
from .graph import EdgeIndex, OutDegrees
from .kernels import get_backend

DEFAULT_SLICE_SIZE = 4096

_PRECISIONS = (1, 2, 4, 8, 16)


@dataclass(frozen=True)
class FrontierPrecision:
    """Edge-vector group size: one wedge-frontier bit covers this many vectors."""

    vectors_per_group: int

    def __post_init__(self):
        if self.vectors_per_group not in _PRECISIONS:
            raise ValueError(f"vectors_per_group must be one of {_PRECISIONS}")

    @property
    def shift(self) -> int:
        return self.vectors_per_group.bit_length() - 1

    def group_of(self, position: int) -> int:
        return position >> self.shift


@dataclass(frozen=True)
class FullnessThreshold:
    """Fraction of total edges below which the transformation is worthwhile."""

    fraction: Fraction

    def __post_init__(self):
        if not 0 <= self.fraction <= 1:
            raise ValueError("threshold fraction must lie in [0, 1]")

    @classmethod
    def of(cls, value) -> "FullnessThreshold":
        return cls(Fraction(str(value)) if isinstance(value, float) else Fraction(value))


class VertexFrontier:
    """Dense vertex bitmask plus the out-degree sum of its members."""

    __slots__ = ("bits", "member_edge_sum")

    def __init__(self, bits: Bitmask, member_edge_sum: int = 0):
        self.bits = bits
        self.member_edge_sum = member_edge_sum

    @classmethod
    def empty(cls, vertex_count: int) -> "VertexFrontier":
        return cls(Bitmask(vertex_count))

    @classmethod
    def from_vertices(cls, ids, degrees: OutDegrees, vertex_count: int) -> "VertexFrontier":
        ids = np.unique(np.asarray(list(ids) if not isinstance(ids, np.ndarray) else ids, dtype=np.int64))
        bits = Bitmask.from_indices(vertex_count, ids)
        return cls(bits, int(degrees[ids].sum()) if ids.size else 0)

    @property
    def vertex_count(self) -> int:
        return self.bits.size

    def insert(self, v: int, degrees: OutDegrees) -> None:
        """Idempotent insert; the edge sum grows only on first insertion."""
        if self.bits.set(v):
            self.member_edge_sum += int(degrees[v])

    def members(self) -> np.ndarray:
        return self.bits.indices()

    def member_count(self) -> int:
        return self.bits.count()

    def is_empty(self) -> bool:
        return self.member_count() == 0

    def recount_edge_sum(self, degrees: OutDegrees) -> int:
        """Recompute the edge sum from scratch (verification only)."""
        m = self.members()
        return int(degrees[m].sum()) if m.size else 0

    def __repr__(self) -> str:
        return f"VertexFrontier(members={self.member_count()}, edge_sum={self.member_edge_sum})"


class WedgeFrontier:
    """Dense bitmask over edge-vector groups at a fixed precision."""

    __slots__ = ("bits", "precision", "vector_count", "entries_visited")

    def __init__(self, vector_count: int, precision: FrontierPrecision, bits: Bitmask | None = None):
        vpg = precision.vectors_per_group
        groups = (vector_count + vpg - 1) // vpg
        self.bits = bits if bits is not None else Bitmask(groups)
        if self.bits.size != groups:
            raise ValueError("bitmask size does not match group count")
        self.precision = precision
        self.vector_count = vector_count
        self.entries_visited = 0

    @classmethod
    def from_groups(cls, groups, vector_count: int, precision: FrontierPrecision) -> "WedgeFrontier":
        w = cls(vector_count, precision)
        for g in groups:
            w.bits.set(g)
        return w

    @property
    def group_count(self) -> int:
        return self.bits.size

    def set_bit_count(self) -> int:
        return self.bits.count()

    def is_empty(self) -> bool:
        return self.set_bit_count() == 0

    def covered_vector_count(self) -> int:
        """Number of vector positions covered by set bits, clipped to the topology."""
        vpg = self.precision.vectors_per_group
        count = self.set_bit_count() * vpg
        overhang = self.group_count * vpg - self.vector_count
        if overhang and self.group_count and self.bits.test(self.group_count - 1):
            count -= overhang
        return count

    def __repr__(self) -> str:
        return f"WedgeFrontier(groups={self.group_count}, set={self.set_bit_count()}, vpg={self.precision.vectors_per_group})"


def wedge_covered_vectors(wedge: WedgeFrontier, vector_count: int) -> np.ndarray:
    """Ascending vector positions whose group bit is set, clipped to ``vector_count``."""
    from ._kernels_py import covered_positions

    return covered_positions(wedge.bits.words, wedge.group_count, wedge.precision.shift, vector_count)


def should_transform(frontier: VertexFrontier, total_edges: int, threshold: FullnessThreshold) -> bool:
    """True iff the frontier's edge sum is strictly below the threshold share.

    Exact rational comparison; a tie falls to the full-scan path.
    """
    if total_edges <= 0:
        raise ValueError("total_edges must be positive")
    frac = threshold.fraction
    return frontier.member_edge_sum * frac.denominator < frac.numerator * total_edges


def transform_frontier(
    frontier: VertexFrontier,
    index: EdgeIndex,
    precision: FrontierPrecision,
    slice_size: int = DEFAULT_SLICE_SIZE,
    workers: int = 1,
    backend=None,
) -> WedgeFrontier:
    """Convert a vertex frontier into a wedge frontier over the indexed topology.

    The frontier is sliced into ``slice_size``-vertex pieces scheduled
    dynamically across ``workers`` threads; bit sets are idempotent and
    atomic, so the result is independent of both parameters. The returned
    frontier's ``entries_visited`` counts exactly the edge-index entries
    read, i.e. the sum of the members' position-list lengths.
    """
    if frontier.vertex_count != index.vertex_count:
        raise ValueError(
            f"frontier covers {frontier.vertex_count} vertices but index covers {index.vertex_count}"
        )
    if slice_size < 1:
        raise ValueError("slice_size must be >= 1")
    if workers < 1:
        raise ValueError("workers must be >= 1")
    wedge = WedgeFrontier(index.vector_count, precision)
    wedge.entries_visited = get_backend(backend).transform(
        frontier.bits.words,
        frontier.vertex_count,
        index.offsets,
        index.positions,
        precision.shift,
        wedge.bits.words,
        slice_size,
        workers,
    )
    return wedge
