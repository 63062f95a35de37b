"""Frontier-driven applications: BFS, connected components, shortest paths.

All three are minimum-propagation programs over int64 values with
``UNREACHED`` as the no-value sentinel, so each carries a ``MinPlusKernel``
descriptor and runs on the compiled path; the callables express the same
semantics for the generic and push-reference paths.
"""

from __future__ import annotations

import numpy as np

from .engine import UNREACHED, ApplicationProgram, MinPlusKernel


def _min_plus_apply(increment: int):
    def apply(old, agg):
        if agg is None:
            return old, False
        cand = agg + increment
        if cand < old:
            return cand, True
        return old, False

    return apply


def bfs_program(root: int) -> ApplicationProgram:
    """Unweighted breadth-first depths from ``root``.

    The frontier starts as just the root; already-visited destinations are
    skipped by the pre-filter, so each vertex is activated at most once over
    a whole run and depths are final when assigned.
    """
    if root < 0:
        raise ValueError("root must be non-negative")

    def initial_values(n: int) -> np.ndarray:
        values = np.full(n, UNREACHED, dtype=np.int64)
        values[root] = 0
        return values

    return ApplicationProgram(
        name="bfs",
        initial_value=lambda v: 0 if v == root else UNREACHED,
        initial_frontier=lambda n: (root,),
        gather=lambda src_value, weight=None: src_value,
        combine=min,
        apply=_min_plus_apply(1),
        should_process=lambda value: value == UNREACHED,
        kernel=MinPlusKernel(filter_unvisited=True, use_weight=False, apply_increment=1),
        initial_values=initial_values,
    )


def cc_program() -> ApplicationProgram:
    """Connected components by iterative minimum-label propagation.

    Requires a symmetrized input graph: a pull-only engine propagates along
    edge direction, so weak connectivity needs both directions present.
    Every vertex starts in the frontier labeled with its own id; labels only
    decrease and converge to the minimum id reachable in the component.
    """
    return ApplicationProgram(
        name="cc",
        initial_value=lambda v: v,
        initial_frontier=lambda n: range(n),
        gather=lambda src_value, weight=None: src_value,
        combine=min,
        apply=_min_plus_apply(0),
        kernel=MinPlusKernel(filter_unvisited=False, use_weight=False, apply_increment=0),
        initial_values=lambda n: np.arange(n, dtype=np.int64),
    )


def sssp_program(root: int) -> ApplicationProgram:
    """Single-source shortest paths, Bellman-Ford style.

    Needs positive edge weights. Unlike BFS there is no one-shot filter: a
    vertex re-activates whenever its distance strictly improves.
    """
    if root < 0:
        raise ValueError("root must be non-negative")

    def initial_values(n: int) -> np.ndarray:
        values = np.full(n, UNREACHED, dtype=np.int64)
        values[root] = 0
        return values

    return ApplicationProgram(
        name="sssp",
        initial_value=lambda v: 0 if v == root else UNREACHED,
        initial_frontier=lambda n: (root,),
        gather=lambda src_value, weight: src_value + weight,
        combine=min,
        apply=_min_plus_apply(0),
        needs_weights=True,
        kernel=MinPlusKernel(filter_unvisited=False, use_weight=True, apply_increment=0),
        initial_values=initial_values,
    )


PROGRAMS = {"bfs": bfs_program, "cc": cc_program, "sssp": sssp_program}


def make_program(name: str, root: int | None = None) -> ApplicationProgram:
    """Instantiate an application by name; bfs/sssp require a root."""
    if name == "cc":
        return cc_program()
    if name not in PROGRAMS:
        raise ValueError(f"unknown application {name!r}")
    if root is None:
        raise ValueError(f"{name} requires a root vertex")
    return PROGRAMS[name](root)
