# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled hot loops: pull-engine scans and the frontier transformation.

Integer min-plus semantics, identical to _kernels_py: int64 vertex values
with a large sentinel for unreached state; a destination is updated and
activated iff the minimum incoming message plus ``apply_inc`` is strictly
below its previous value.

All entry points release the GIL, so Python threads driving disjoint
vector/vertex ranges run genuinely in parallel. Frontier bits are set with
atomic fetch-or because ranges may share a 64-bit word at their boundary;
everything else written concurrently is disjoint by construction.
"""

from libc.stdint cimport int64_t, uint64_t

cdef extern from *:
    """
    #include <stdint.h>
    static inline void wg_atomic_or64(uint64_t *p, uint64_t v) {
        __atomic_fetch_or(p, v, __ATOMIC_RELAXED);
    }
    static inline int wg_ctz64(uint64_t v) { return __builtin_ctzll(v); }
    """
    void wg_atomic_or64(uint64_t *p, uint64_t v) noexcept nogil
    int wg_ctz64(uint64_t v) noexcept nogil

AVAILABLE = True


cdef inline void _set_bit(uint64_t[::1] words, int64_t i) noexcept nogil:
    wg_atomic_or64(&words[i >> 6], (<uint64_t>1) << (i & 63))


cdef int64_t _transform_range(const uint64_t[::1] fwords, int64_t lo, int64_t hi,
                              const int64_t[::1] offsets, const int64_t[::1] positions,
                              int shift, uint64_t[::1] wwords) noexcept nogil:
    cdef int64_t w, v, j, visited = 0
    cdef uint64_t word
    for w in range(lo >> 6, (hi + 63) >> 6):
        word = fwords[w]
        if w == (lo >> 6) and (lo & 63):
            word &= ~(((<uint64_t>1) << (lo & 63)) - 1)
        if (hi & 63) and w == (hi >> 6):
            word &= ((<uint64_t>1) << (hi & 63)) - 1
        while word:
            v = (w << 6) + wg_ctz64(word)
            word &= word - 1
            for j in range(offsets[v], offsets[v + 1]):
                _set_bit(wwords, positions[j] >> shift)
            visited += offsets[v + 1] - offsets[v]
    return visited


def transform_range(const uint64_t[::1] frontier_words, int64_t lo, int64_t hi,
                    const int64_t[::1] offsets, const int64_t[::1] positions,
                    int shift, uint64_t[::1] wedge_words):
    """Scatter group bits for frontier members in [lo, hi); returns entries visited."""
    cdef int64_t visited
    with nogil:
        visited = _transform_range(frontier_words, lo, hi, offsets, positions, shift, wedge_words)
    return visited


cdef int64_t _pull_full_range(const int64_t[::1] vec_dst,
                              const int64_t[:, ::1] lane_src,
                              const int64_t[:, ::1] lane_wgt,
                              const int64_t[::1] lane_count,
                              const int64_t[::1] prev, int64_t[::1] nxt,
                              uint64_t[::1] out_words,
                              bint filter_unvisited, bint use_weight,
                              int64_t apply_inc, int64_t sentinel,
                              int64_t vlo, int64_t vhi) noexcept nogil:
    cdef int64_t i = vlo, d, agg, cand, m, touched = 0, k
    while i < vhi:
        d = vec_dst[i]
        if filter_unvisited and prev[d] != sentinel:
            while i < vhi and vec_dst[i] == d:
                i += 1
            continue
        agg = sentinel
        while i < vhi and vec_dst[i] == d:
            for k in range(lane_count[i]):
                m = prev[lane_src[i, k]]
                if use_weight:
                    m += lane_wgt[i, k]
                if m < agg:
                    agg = m
            touched += 1
            i += 1
        cand = agg + apply_inc
        if cand < prev[d]:
            nxt[d] = cand
            _set_bit(out_words, d)
    return touched


def pull_full_range(const int64_t[::1] vec_dst, const int64_t[:, ::1] lane_src,
                    const int64_t[:, ::1] lane_wgt, const int64_t[::1] lane_count,
                    const int64_t[::1] prev, int64_t[::1] nxt, uint64_t[::1] out_words,
                    bint filter_unvisited, bint use_weight,
                    int64_t apply_inc, int64_t sentinel,
                    int64_t vlo, int64_t vhi):
    """Full scan of vectors [vlo, vhi); returns vectors touched."""
    cdef int64_t touched
    with nogil:
        touched = _pull_full_range(vec_dst, lane_src, lane_wgt, lane_count, prev, nxt,
                                   out_words, filter_unvisited, use_weight, apply_inc,
                                   sentinel, vlo, vhi)
    return touched


cdef int64_t _pull_wedge_range(const int64_t[::1] vec_dst,
                               const int64_t[:, ::1] lane_src,
                               const int64_t[:, ::1] lane_wgt,
                               const int64_t[::1] lane_count,
                               const uint64_t[::1] wwords, int shift,
                               const int64_t[::1] prev, int64_t[::1] nxt,
                               uint64_t[::1] out_words,
                               bint filter_unvisited, bint use_weight,
                               int64_t apply_inc, int64_t sentinel,
                               int64_t vlo, int64_t vhi) noexcept nogil:
    # Covered vectors are visited in ascending position order; destinations
    # are non-decreasing along positions, so a run of equal destinations in
    # the covered subsequence is aggregated once and applied once even when
    # it spans several groups or gaps of uncovered vectors.
    cdef int64_t g_first = vlo >> shift
    cdef int64_t g_last = (vhi - 1) >> shift
    cdef int64_t w, g, v, vstart, vend, d, m, cand, k
    cdef int64_t cur = -1, agg = 0, touched = 0
    cdef bint skipping = False
    cdef uint64_t word
    for w in range(g_first >> 6, (g_last >> 6) + 1):
        word = wwords[w]
        if w == (g_first >> 6) and (g_first & 63):
            word &= ~(((<uint64_t>1) << (g_first & 63)) - 1)
        if w == (g_last >> 6) and (g_last & 63) != 63:
            word &= ((<uint64_t>1) << ((g_last & 63) + 1)) - 1
        while word:
            g = (w << 6) + wg_ctz64(word)
            word &= word - 1
            vstart = g << shift
            if vstart < vlo:
                vstart = vlo
            vend = (g + 1) << shift
            if vend > vhi:
                vend = vhi
            for v in range(vstart, vend):
                d = vec_dst[v]
                if d != cur:
                    if cur >= 0 and not skipping:
                        cand = agg + apply_inc
                        if cand < prev[cur]:
                            nxt[cur] = cand
                            _set_bit(out_words, cur)
                    cur = d
                    agg = sentinel
                    skipping = filter_unvisited and prev[d] != sentinel
                if skipping:
                    continue
                for k in range(lane_count[v]):
                    m = prev[lane_src[v, k]]
                    if use_weight:
                        m += lane_wgt[v, k]
                    if m < agg:
                        agg = m
                touched += 1
    if cur >= 0 and not skipping:
        cand = agg + apply_inc
        if cand < prev[cur]:
            nxt[cur] = cand
            _set_bit(out_words, cur)
    return touched


def pull_wedge_range(const int64_t[::1] vec_dst, const int64_t[:, ::1] lane_src,
                     const int64_t[:, ::1] lane_wgt, const int64_t[::1] lane_count,
                     const uint64_t[::1] wedge_words, int shift,
                     const int64_t[::1] prev, int64_t[::1] nxt, uint64_t[::1] out_words,
                     bint filter_unvisited, bint use_weight,
                     int64_t apply_inc, int64_t sentinel,
                     int64_t vlo, int64_t vhi):
    """Scan covered vectors within [vlo, vhi); returns vectors touched."""
    cdef int64_t touched
    with nogil:
        touched = _pull_wedge_range(vec_dst, lane_src, lane_wgt, lane_count, wedge_words,
                                    shift, prev, nxt, out_words, filter_unvisited,
                                    use_weight, apply_inc, sentinel, vlo, vhi)
    return touched
