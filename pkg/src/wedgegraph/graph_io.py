"""Graph ingestion, synthesis, and weight generation.

Edge-list text format: one edge per line, ``src dst`` or ``src dst weight``,
whitespace-separated; lines starting with ``#`` or ``%`` are comments. The
vertex count defaults to 1 + the largest id; a ``# vertices N`` header
overrides it (the first such header wins), which keeps graphs with trailing
isolated vertices loadable. A file mixes weighted and unweighted lines at
its peril: that is rejected.

Generators cover a path, a 4-neighbor grid (mesh-like, even degree
distribution) and an RMAT sampler (power-law degree skew), all deterministic
in their parameters and seed. Weights for unweighted graphs come from a
multiplicative hash of the endpoints, fixed here for reproducibility.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import EdgeList

HASH_MULTIPLIER = 0x9E3779B97F4A7C15
_MASK64 = np.uint64(0xFFFFFFFFFFFFFFFF)

RMAT_DEFAULT_PROBS = (0.57, 0.19, 0.19, 0.05)


class ParseError(ValueError):
    """Malformed edge-list input, with the offending line number in the message."""


def parse_edge_list(text: str) -> EdgeList:
    srcs: list[int] = []
    dsts: list[int] = []
    weights: list[int] = []
    weighted: bool | None = None
    header_n: int | None = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line[0] in "#%":
            tokens = line[1:].split()
            if header_n is None and len(tokens) == 2 and tokens[0] == "vertices" and tokens[1].isdigit():
                header_n = int(tokens[1])
            continue
        tokens = line.split()
        if len(tokens) not in (2, 3):
            raise ParseError(f"line {lineno}: expected 2 or 3 fields, got {len(tokens)}")
        try:
            fields = [int(t) for t in tokens]
        except ValueError:
            raise ParseError(f"line {lineno}: non-integer token") from None
        if fields[0] < 0 or fields[1] < 0:
            raise ParseError(f"line {lineno}: negative vertex id")
        has_weight = len(fields) == 3
        if weighted is None:
            weighted = has_weight
        elif weighted != has_weight:
            raise ParseError(f"line {lineno}: mixed weighted and unweighted edges")
        if has_weight and fields[2] < 1:
            raise ParseError(f"line {lineno}: weight must be positive")
        srcs.append(fields[0])
        dsts.append(fields[1])
        if has_weight:
            weights.append(fields[2])

    implied = 1 + max(max(srcs, default=-1), max(dsts, default=-1))
    vertex_count = header_n if header_n is not None else implied
    return EdgeList(vertex_count, srcs, dsts, weights if weighted else None)


def serialize_edge_list(edges: EdgeList) -> str:
    """Inverse of parse_edge_list; emits a vertex header only when needed."""
    lines = []
    implied = 1 + int(max(edges.src.max(initial=-1), edges.dst.max(initial=-1)))
    if edges.vertex_count != implied:
        lines.append(f"# vertices {edges.vertex_count}")
    for edge in edges.edges():
        lines.append(" ".join(str(x) for x in edge))
    return "".join(line + "\n" for line in lines)


def symmetrize(edges: EdgeList, dedup: bool = False) -> EdgeList:
    """Add the reverse of every edge; self-loops are kept once.

    With ``dedup``, identical (src, dst) pairs collapse to one edge keeping
    the minimum weight, and the result is sorted canonically so the
    operation is idempotent.
    """
    loops = edges.src == edges.dst
    src = np.concatenate([edges.src, edges.dst[~loops]])
    dst = np.concatenate([edges.dst, edges.src[~loops]])
    wgt = np.concatenate([edges.weight, edges.weight[~loops]]) if edges.weight is not None else None
    if not dedup:
        return EdgeList(edges.vertex_count, src, dst, wgt)

    if wgt is None:
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        keep = np.ones(len(src), dtype=bool)
        keep[1:] = (src[1:] != src[:-1]) | (dst[1:] != dst[:-1])
        return EdgeList(edges.vertex_count, src[keep], dst[keep], None)

    order = np.lexsort((wgt, dst, src))
    src, dst, wgt = src[order], dst[order], wgt[order]
    keep = np.ones(len(src), dtype=bool)
    keep[1:] = (src[1:] != src[:-1]) | (dst[1:] != dst[:-1])
    return EdgeList(edges.vertex_count, src[keep], dst[keep], wgt[keep])


@dataclass(frozen=True)
class GenSpec:
    """Synthetic graph request: path(n), grid(rows, cols) or rmat(scale, edge_factor)."""

    kind: str
    n: int = 0
    rows: int = 0
    cols: int = 0
    scale: int = 0
    edge_factor: int = 0
    probs: tuple[float, float, float, float] = RMAT_DEFAULT_PROBS
    seed: int = 1

    def __post_init__(self):
        if self.kind == "path":
            if self.n < 1:
                raise ValueError("path size must be >= 1")
        elif self.kind == "grid":
            if self.rows < 1 or self.cols < 1:
                raise ValueError("grid sizes must be >= 1")
        elif self.kind == "rmat":
            if self.scale < 1 or self.edge_factor < 1:
                raise ValueError("rmat scale and edge_factor must be >= 1")
            if any(p < 0 for p in self.probs) or abs(sum(self.probs) - 1.0) > 1e-9:
                raise ValueError("rmat probabilities must be non-negative and sum to 1")
        else:
            raise ValueError(f"unknown generator kind {self.kind!r}")

    @classmethod
    def parse(cls, text: str, seed: int = 1) -> "GenSpec":
        """Parse CLI-style specs: path:N, grid:R:C, rmat:SCALE:EF[:A:B:C:D]."""
        kind, *args = text.split(":")
        try:
            if kind == "path" and len(args) == 1:
                return cls("path", n=int(args[0]), seed=seed)
            if kind == "grid" and len(args) == 2:
                return cls("grid", rows=int(args[0]), cols=int(args[1]), seed=seed)
            if kind == "rmat" and len(args) in (2, 6):
                probs = tuple(float(p) for p in args[2:6]) if len(args) == 6 else RMAT_DEFAULT_PROBS
                return cls("rmat", scale=int(args[0]), edge_factor=int(args[1]), probs=probs, seed=seed)
        except ValueError as exc:
            raise ValueError(f"bad generator spec {text!r}: {exc}") from None
        raise ValueError(f"malformed generator spec {text!r}")


def generate(spec: GenSpec) -> EdgeList:
    if spec.kind == "path":
        n = spec.n
        src = np.arange(n - 1, dtype=np.int64)
        return EdgeList(n, src, src + 1)
    if spec.kind == "grid":
        return _generate_grid(spec.rows, spec.cols)
    return _generate_rmat(spec.scale, spec.edge_factor, spec.probs, spec.seed)


def _generate_grid(rows: int, cols: int) -> EdgeList:
    srcs: list[int] = []
    dsts: list[int] = []

    def link(a: int, b: int) -> None:
        srcs.extend((a, b))
        dsts.extend((b, a))

    for i in range(rows):
        for j in range(cols):
            v = i * cols + j
            if j + 1 < cols:
                link(v, v + 1)
            if i + 1 < rows:
                link(v, v + cols)
    return EdgeList(rows * cols, srcs, dsts)


def _generate_rmat(scale: int, edge_factor: int, probs, seed: int) -> EdgeList:
    n = 1 << scale
    m = edge_factor * n
    a, b, c, _ = probs
    rng = np.random.default_rng(np.random.PCG64(seed))
    draws = rng.random((m, scale))

    quadrant = (draws >= a).astype(np.int64) + (draws >= a + b) + (draws >= a + b + c)
    src = np.zeros(m, dtype=np.int64)
    dst = np.zeros(m, dtype=np.int64)
    for level in range(scale):
        shift = scale - 1 - level
        src |= (quadrant[:, level] >> 1) << shift
        dst |= (quadrant[:, level] & 1) << shift
    return EdgeList(n, src, dst)


def synthesize_weights(edges: EdgeList, max_weight: int) -> EdgeList:
    """Deterministic per-edge weights in [1, max_weight] via a multiplicative hash.

    weight(s, d) = 1 + ((((s * K) xor d) * K) >> 48) mod max_weight over
    64-bit wraparound arithmetic, K = 0x9E3779B97F4A7C15.
    """
    if edges.is_weighted():
        raise ValueError("edge list already carries weights")
    if max_weight < 1:
        raise ValueError("max_weight must be >= 1")
    k = np.uint64(HASH_MULTIPLIER)
    s = edges.src.astype(np.uint64)
    d = edges.dst.astype(np.uint64)
    with np.errstate(over="ignore"):
        h = (((s * k) & _MASK64) ^ d) * k & _MASK64
    weights = 1 + ((h >> np.uint64(48)) % np.uint64(max_weight)).astype(np.int64)
    return EdgeList(edges.vertex_count, edges.src, edges.dst, weights)
