"""Compiled traversal kernels shared by the measurement modules.

Everything here operates on raw CSR arrays (``indptr`` int64, ``indices``
int32) so one set of kernels serves undirected graphs, directed graphs
and their reverses. Kernels never mutate the adjacency arrays.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_INT32_INF = np.int32(2**31 - 1)


@njit(cache=True)
def bfs_fill(indptr, indices, source, dist):
    """Hop distances from ``source``; unreached entries are set to -1.

    Returns the number of reached nodes (including the source).
    """
    n = dist.shape[0]
    for i in range(n):
        dist[i] = -1
    queue = np.empty(n, np.int32)
    dist[source] = 0
    queue[0] = source
    head = 0
    tail = 1
    while head < tail:
        x = queue[head]
        head += 1
        dx = dist[x]
        for k in range(indptr[x], indptr[x + 1]):
            y = indices[k]
            if dist[y] < 0:
                dist[y] = dx + 1
                queue[tail] = y
                tail += 1
    return tail


@njit(cache=True)
def _expand_level(indptr, indices, queue, lo, hi, dist_self, stamp_self,
                  dist_other, stamp_other, qid, d_new, best):
    """Grow one BFS level of one search side; returns (new tail, best meet)."""
    tail = hi
    for qi in range(lo, hi):
        x = queue[qi]
        for k in range(indptr[x], indptr[x + 1]):
            y = indices[k]
            if stamp_self[y] != qid:
                stamp_self[y] = qid
                dist_self[y] = d_new
                queue[tail] = y
                tail += 1
                if stamp_other[y] == qid:
                    cand = d_new + dist_other[y]
                    if cand < best:
                        best = cand
    return tail, best


@njit(cache=True)
def pair_distances(out_indptr, out_indices, in_indptr, in_indices, us, vs):
    """Exact hop distance for each pair (us[i] -> vs[i]); -1 if unreachable.

    Bidirectional level-synchronous BFS: a forward search from the source
    and a reverse search from the target (pass the out-CSR twice for
    undirected graphs) grow alternately, smaller frontier first, until the
    completed radii certify the best meeting point. Visitation marks are
    per-query stamps, so nothing is cleared between pairs.
    """
    n = out_indptr.shape[0] - 1
    npairs = us.shape[0]
    out = np.empty(npairs, np.int32)
    dist_s = np.empty(n, np.int32)
    dist_t = np.empty(n, np.int32)
    stamp_s = np.full(n, -1, np.int64)
    stamp_t = np.full(n, -1, np.int64)
    qs = np.empty(n, np.int32)
    qt = np.empty(n, np.int32)
    for i in range(npairs):
        s = us[i]
        t = vs[i]
        if s == t:
            out[i] = 0
            continue
        qid = i
        qs[0] = s
        dist_s[s] = 0
        stamp_s[s] = qid
        qt[0] = t
        dist_t[t] = 0
        stamp_t[t] = qid
        s_lo, s_hi = 0, 1
        t_lo, t_hi = 0, 1
        rs = 0
        rt = 0
        best = _INT32_INF
        while True:
            # All paths of length <= rs + rt have been seen already.
            if best <= rs + rt:
                break
            s_size = s_hi - s_lo
            t_size = t_hi - t_lo
            if s_size == 0 or t_size == 0:
                break
            if s_size <= t_size:
                rs += 1
                new_hi, best = _expand_level(out_indptr, out_indices, qs,
                                             s_lo, s_hi, dist_s, stamp_s,
                                             dist_t, stamp_t, qid, rs, best)
                s_lo, s_hi = s_hi, new_hi
            else:
                rt += 1
                new_hi, best = _expand_level(in_indptr, in_indices, qt,
                                             t_lo, t_hi, dist_t, stamp_t,
                                             dist_s, stamp_s, qid, rt, best)
                t_lo, t_hi = t_hi, new_hi
        out[i] = -1 if best == _INT32_INF else best
    return out


@njit(cache=True)
def component_labels(indptr, indices, labels):
    """Label connected components over a symmetric CSR; returns the count.

    Components are numbered 0, 1, ... in order of their smallest node id.
    """
    n = labels.shape[0]
    for i in range(n):
        labels[i] = -1
    queue = np.empty(n, np.int32)
    ncomp = 0
    for root in range(n):
        if labels[root] >= 0:
            continue
        labels[root] = ncomp
        queue[0] = root
        head = 0
        tail = 1
        while head < tail:
            x = queue[head]
            head += 1
            for k in range(indptr[x], indptr[x + 1]):
                y = indices[k]
                if labels[y] < 0:
                    labels[y] = ncomp
                    queue[tail] = y
                    tail += 1
        ncomp += 1
    return ncomp
