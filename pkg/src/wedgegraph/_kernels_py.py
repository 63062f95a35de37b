"""Numpy fallbacks for the compiled kernels.

Semantics are defined by the integer min-plus family shared with the
extension module: vertex values are int64, ``sentinel`` marks unreached
state, a message is ``prev[src]`` plus the lane weight when ``use_weight``,
the per-destination aggregate is the minimum message, and a destination is
updated (and activated) iff ``aggregate + apply_increment`` is strictly
below its previous value. Padding lanes and unreached sources contribute
values at or above the sentinel and therefore never win the minimum.

These implementations are sequential; worker counts only affect the
compiled backend. Results are bit-identical between the two.
"""

from __future__ import annotations

import numpy as np

from .bitmask import bit_indices, set_bits

AVAILABLE = True


def covered_positions(wedge_words: np.ndarray, group_count: int, shift: int, vector_count: int) -> np.ndarray:
    """Ascending vector positions covered by the set group bits, clipped."""
    groups = bit_indices(wedge_words, group_count)
    if groups.size == 0:
        return groups
    vpg = 1 << shift
    pos = (groups[:, None] << shift) + np.arange(vpg, dtype=np.int64)[None, :]
    pos = pos.ravel()
    return pos[pos < vector_count]


def _apply_min_plus(agg, prev, nxt, out_words, filter_unvisited, apply_inc, sentinel):
    cand = agg + apply_inc
    upd = cand < prev
    if filter_unvisited:
        upd &= prev == sentinel
    ids = np.nonzero(upd)[0]
    if ids.size:
        nxt[ids] = cand[ids]
        set_bits(out_words, ids)


def _scan(topology, positions, prev, nxt, out_words, kern, sentinel):
    """Aggregate the given vector positions (None means all) and apply."""
    if positions is None:
        vec_dst = topology.vec_dst
        lane_src = topology.lane_src
        lane_wgt = topology.lane_weight
        valid = topology.lane_valid()
    else:
        if positions.size == 0:
            return 0
        vec_dst = topology.vec_dst[positions]
        lane_src = topology.lane_src[positions]
        lane_wgt = topology.lane_weight[positions] if topology.lane_weight is not None else None
        valid = topology.lane_valid()[positions]

    if kern.filter_unvisited:
        processed = prev[vec_dst] == sentinel
        touched = int(np.count_nonzero(processed))
        if touched == 0:
            return 0
        vec_dst = vec_dst[processed]
        lane_src = lane_src[processed]
        lane_wgt = lane_wgt[processed] if lane_wgt is not None else None
        valid = valid[processed]
    else:
        touched = int(vec_dst.shape[0])
        if touched == 0:
            return 0

    msgs = prev[lane_src]
    if kern.use_weight:
        msgs = msgs + lane_wgt
    msgs = np.where(valid, msgs, sentinel)
    vec_min = msgs.min(axis=1)

    agg = np.full(len(prev), sentinel, dtype=np.int64)
    np.minimum.at(agg, vec_dst, vec_min)
    _apply_min_plus(agg, prev, nxt, out_words, kern.filter_unvisited, kern.apply_increment, sentinel)
    return touched


def pull_full(topology, prev, nxt, out_words, kern, sentinel, workers=1):
    return _scan(topology, None, prev, nxt, out_words, kern, sentinel)


def pull_wedge(topology, wedge_words, shift, group_count, prev, nxt, out_words, kern, sentinel, workers=1):
    pos = covered_positions(wedge_words, group_count, shift, topology.vector_count)
    return _scan(topology, pos, prev, nxt, out_words, kern, sentinel)


def transform(frontier_words, vertex_count, offsets, positions, shift, wedge_words, slice_size=4096, workers=1):
    """Set the group bit for every out-position of every frontier member.

    Returns the number of edge-index entries visited, which equals the sum
    of the members' position-list lengths.
    """
    members = bit_indices(frontier_words, vertex_count)
    if members.size == 0:
        return 0
    starts = offsets[members]
    lens = offsets[members + 1] - starts
    total = int(lens.sum())
    if total == 0:
        return 0
    rep = np.repeat(np.arange(len(members)), lens)
    within = np.arange(total, dtype=np.int64) - np.repeat(np.cumsum(lens) - lens, lens)
    groups = positions[starts[rep] + within] >> shift
    set_bits(wedge_words, groups)
    return total
