"""Kernel backend selection and parallel dispatch.

The compiled extension is picked at import time when present; otherwise the
numpy fallback is used. Override with the ``WEDGE_BACKEND`` environment
variable ({auto, native, python}) or per call via the ``backend=`` argument
accepted by the engine and transform entry points.

The native backend parallelizes by slicing work into contiguous chunks and
scheduling them dynamically onto a thread pool; the kernels release the GIL.
Chunk boundaries over vectors are aligned so no two chunks share a
destination vertex, which makes all value writes disjoint; frontier bit
sets are atomic, so results are bit-identical for any worker count. The
python backend runs sequentially whatever the requested worker count, with
identical results.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import _kernels_py

try:
    from . import _kernels as _native
except ImportError:
    _native = None


def _run_tasks(tasks, workers: int):
    if workers <= 1 or len(tasks) <= 1:
        return [t() for t in tasks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda t: t(), tasks))


def _vector_ranges(vec_dst: np.ndarray, parts: int) -> list[tuple[int, int]]:
    """Split [0, nvec) into up to ``parts`` ranges on destination boundaries."""
    nvec = len(vec_dst)
    if nvec == 0:
        return []
    bounds = [0]
    for k in range(1, parts):
        b = (k * nvec) // parts
        while 0 < b < nvec and vec_dst[b] == vec_dst[b - 1]:
            b += 1
        if b > bounds[-1] and b < nvec:
            bounds.append(b)
    bounds.append(nvec)
    return list(zip(bounds[:-1], bounds[1:]))


class PythonBackend:
    name = "python"

    def pull_full(self, topology, prev, nxt, out_words, kern, sentinel, workers=1):
        return _kernels_py.pull_full(topology, prev, nxt, out_words, kern, sentinel, workers)

    def pull_wedge(self, topology, wedge_words, shift, group_count, prev, nxt, out_words, kern, sentinel, workers=1):
        return _kernels_py.pull_wedge(
            topology, wedge_words, shift, group_count, prev, nxt, out_words, kern, sentinel, workers
        )

    def transform(self, frontier_words, vertex_count, offsets, positions, shift, wedge_words, slice_size, workers):
        return _kernels_py.transform(
            frontier_words, vertex_count, offsets, positions, shift, wedge_words, slice_size, workers
        )


class NativeBackend:
    name = "native"

    def _lanes(self, topology):
        # Unweighted topologies reuse lane_src as a stand-in weight buffer;
        # the kernels never read it when use_weight is false.
        wgt = topology.lane_weight if topology.lane_weight is not None else topology.lane_src
        return topology.lane_src, wgt

    def pull_full(self, topology, prev, nxt, out_words, kern, sentinel, workers=1):
        lane_src, lane_wgt = self._lanes(topology)
        parts = workers * 4 if workers > 1 else 1
        tasks = [
            (
                lambda lo=lo, hi=hi: _native.pull_full_range(
                    topology.vec_dst, lane_src, lane_wgt, topology.lane_count,
                    prev, nxt, out_words,
                    kern.filter_unvisited, kern.use_weight, kern.apply_increment, sentinel,
                    lo, hi,
                )
            )
            for lo, hi in _vector_ranges(topology.vec_dst, parts)
        ]
        return sum(_run_tasks(tasks, workers))

    def pull_wedge(self, topology, wedge_words, shift, group_count, prev, nxt, out_words, kern, sentinel, workers=1):
        if topology.vector_count == 0:
            return 0
        lane_src, lane_wgt = self._lanes(topology)
        parts = workers * 4 if workers > 1 else 1
        tasks = [
            (
                lambda lo=lo, hi=hi: _native.pull_wedge_range(
                    topology.vec_dst, lane_src, lane_wgt, topology.lane_count,
                    wedge_words, shift, prev, nxt, out_words,
                    kern.filter_unvisited, kern.use_weight, kern.apply_increment, sentinel,
                    lo, hi,
                )
            )
            for lo, hi in _vector_ranges(topology.vec_dst, parts)
            if hi > lo
        ]
        return sum(_run_tasks(tasks, workers))

    def transform(self, frontier_words, vertex_count, offsets, positions, shift, wedge_words, slice_size, workers):
        tasks = [
            (
                lambda lo=lo: _native.transform_range(
                    frontier_words, lo, min(lo + slice_size, vertex_count), offsets, positions, shift, wedge_words
                )
            )
            for lo in range(0, vertex_count, slice_size)
        ]
        return sum(_run_tasks(tasks, workers))


_BACKENDS: dict[str, object] = {"python": PythonBackend()}
if _native is not None:
    _BACKENDS["native"] = NativeBackend()


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_BACKENDS))


def get_backend(name=None):
    """Resolve a backend by name; ``None``/"auto" yields the default.

    Backend objects pass through unchanged.
    """
    if name is None or name == "auto":
        return DEFAULT
    if not isinstance(name, str):
        return name
    try:
        return _BACKENDS[name]
    except KeyError:
        raise RuntimeError(
            f"backend {name!r} is not available (have: {', '.join(available_backends())})"
        ) from None


def _select_default():
    forced = os.environ.get("WEDGE_BACKEND", "auto")
    if forced == "auto":
        return _BACKENDS.get("native", _BACKENDS["python"])
    if forced not in _BACKENDS:
        raise RuntimeError(f"WEDGE_BACKEND={forced!r} is not available")
    return _BACKENDS[forced]


DEFAULT = _select_default()
