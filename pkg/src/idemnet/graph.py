"""Immutable graph representation and the traversal kernels built on it.

Graphs are stored in compressed sparse adjacency form and frozen after
construction, so every measurement routine can treat them as read-only
and run concurrently without locks. Hop distances use the dedicated
sentinel :data:`UNREACHABLE` (never a large finite stand-in), so callers
can always tell "far" from "no path".
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels

#: Distance value reported when no path exists.
UNREACHABLE = -1

FORWARD = "forward"
REVERSE = "reverse"


class GraphError(ValueError):
    """Raised for invalid graph construction input."""


class Graph:
    """Unweighted graph over nodes ``0..n-1``, frozen after construction.

    Adjacency is held as sorted, duplicate-free CSR arrays. For directed
    graphs an in-adjacency copy is kept so reverse traversals are as cheap
    as forward ones. Use :func:`build_graph` to construct one.
    """

    __slots__ = ("n", "directed", "allow_self_loops",
                 "_out_indptr", "_out_indices", "_in_indptr", "_in_indices",
                 "_num_edges")

    def __init__(self, n, directed, allow_self_loops,
                 out_indptr, out_indices, in_indptr, in_indices, num_edges):
        self.n = n
        self.directed = directed
        self.allow_self_loops = allow_self_loops
        self._out_indptr = out_indptr
        self._out_indices = out_indices
        self._in_indptr = in_indptr
        self._in_indices = in_indices
        self._num_edges = num_edges
        for arr in (out_indptr, out_indices, in_indptr, in_indices):
            if arr is not None:
                arr.flags.writeable = False

    # -- accessors ---------------------------------------------------------

    @property
    def num_edges(self):
        """Edge count (undirected edges, or arcs if directed)."""
        return self._num_edges

    @property
    def out_indptr(self):
        return self._out_indptr

    @property
    def out_indices(self):
        return self._out_indices

    @property
    def in_indptr(self):
        return self._in_indptr if self.directed else self._out_indptr

    @property
    def in_indices(self):
        return self._in_indices if self.directed else self._out_indices

    def out_neighbors(self, u):
        """Sorted out-neighbors of ``u`` (read-only view)."""
        return self._out_indices[self._out_indptr[u]:self._out_indptr[u + 1]]

    def in_neighbors(self, u):
        return self.in_indices[self.in_indptr[u]:self.in_indptr[u + 1]]

    def out_degree(self, u):
        return int(self._out_indptr[u + 1] - self._out_indptr[u])

    def degree(self, u):
        """Degree of ``u``; for directed graphs, out-degree + in-degree."""
        d = self.out_degree(u)
        if self.directed:
            d += int(self.in_indptr[u + 1] - self.in_indptr[u])
        return d

    def degrees(self):
        """Array of all degrees (total degree for directed graphs)."""
        d = np.diff(self._out_indptr)
        if self.directed:
            d = d + np.diff(self._in_indptr)
        return d.astype(np.int64)

    def edges(self):
        """Canonical edge array, shape (m, 2).

        Undirected: each edge once with u <= v, sorted lexicographically.
        Directed: all arcs in lexicographic order.
        """
        rows = np.repeat(np.arange(self.n, dtype=np.int64),
                         np.diff(self._out_indptr))
        cols = self._out_indices.astype(np.int64)
        if not self.directed:
            keep = rows <= cols
            rows, cols = rows[keep], cols[keep]
        return np.column_stack([rows, cols])

    def __repr__(self):
        kind = "directed" if self.directed else "undirected"
        return f"Graph(n={self.n}, {kind}, edges={self.num_edges})"


def _csr_from_pairs(n, u, v):
    """Sorted duplicate-free CSR from arc endpoint arrays."""
    key = u.astype(np.int64) * n + v.astype(np.int64)
    key = np.unique(key)
    uu = key // n
    vv = key % n
    indptr = np.zeros(n + 1, np.int64)
    np.add.at(indptr, uu + 1, 1)
    np.cumsum(indptr, out=indptr)
    return indptr, vv.astype(np.int32)


def build_graph(n, edges, *, directed=False, allow_self_loops=False):
    """Build a frozen :class:`Graph` from an edge list.

    Duplicate input edges are collapsed; for undirected graphs (u, v) and
    (v, u) are the same edge. Raises :class:`GraphError` on out-of-range
    endpoints or (when not allowed) self-loops.
    """
    if n < 1:
        raise GraphError(f"need at least one node, got n={n}")
    edges = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges,
                       dtype=np.int64)
    if edges.size == 0:
        edges = edges.reshape(0, 2)
    if edges.ndim != 2 or edges.shape[1] != 2:
        raise GraphError("edges must be pairs (u, v)")
    u, v = edges[:, 0], edges[:, 1]
    if edges.size and (u.min() < 0 or v.min() < 0 or u.max() >= n or v.max() >= n):
        bad = edges[(u < 0) | (v < 0) | (u >= n) | (v >= n)][0]
        raise GraphError(f"edge endpoint out of range for n={n}: {tuple(bad)}")
    loops = u == v
    if loops.any() and not allow_self_loops:
        raise GraphError(f"self-loop not allowed: node {int(u[loops][0])}")

    if directed:
        indptr, indices = _csr_from_pairs(n, u, v)
        in_indptr, in_indices = _csr_from_pairs(n, v, u)
        num_edges = int(indices.size)
        return Graph(n, True, allow_self_loops, indptr, indices,
                     in_indptr, in_indices, num_edges)

    uu = np.concatenate([u, v])
    vv = np.concatenate([v, u])
    indptr, indices = _csr_from_pairs(n, uu, vv)
    rows = np.repeat(np.arange(n, dtype=np.int64), np.diff(indptr))
    nloops = int((rows == indices).sum())
    num_edges = (int(indices.size) - nloops) // 2 + nloops
    return Graph(n, False, allow_self_loops, indptr, indices, None, None,
                 num_edges)


@dataclass
class DistanceArray:
    """Single-source hop distances, with :data:`UNREACHABLE` where no path."""
    source: int
    direction: str
    dist: np.ndarray


def bfs_distances(g, source, direction=FORWARD):
    """Exact shortest-path hop distances from ``source``.

    ``direction="reverse"`` follows arcs backwards (distance *to* the
    source); for undirected graphs reverse equals forward.
    """
    if not 0 <= source < g.n:
        raise ValueError(f"source {source} out of range for n={g.n}")
    if direction not in (FORWARD, REVERSE):
        raise ValueError(f"direction must be forward|reverse, got {direction!r}")
    if direction == REVERSE:
        indptr, indices = g.in_indptr, g.in_indices
    else:
        indptr, indices = g.out_indptr, g.out_indices
    dist = np.empty(g.n, np.int32)
    _kernels.bfs_fill(indptr, indices, source, dist)
    return DistanceArray(source=source, direction=direction, dist=dist)


@dataclass
class BallProfile:
    """Ball sizes |B_u(r)| and boundary edge counts around one center.

    ``sizes[r]`` is the number of nodes within distance r of the center;
    ``boundary_edges[r]`` counts edges with exactly one endpoint inside
    the ball of radius r (for directed graphs: out-arcs leaving it).
    """
    center: int
    sizes: np.ndarray
    boundary_edges: np.ndarray


def ball_profile(g, u, r_max=None):
    """Ball growth profile around ``u``, truncated at ``r_max`` if given.

    The profile always stops at stabilization (when the ball equals the
    reachable set), at which point the boundary count is zero.
    """
    if not 0 <= u < g.n:
        raise ValueError(f"center {u} out of range for n={g.n}")
    dist = bfs_distances(g, u).dist
    reached = dist >= 0
    ecc = int(dist[reached].max())
    r_top = ecc if r_max is None else min(ecc, int(r_max))
    layer_counts = np.bincount(dist[reached], minlength=ecc + 1)
    sizes = np.cumsum(layer_counts)[:r_top + 1]

    # An edge crosses the boundary of B_u(r) iff its endpoint levels are
    # r and r+1, so one O(m) scan yields every radius at once.
    rows = np.repeat(np.arange(g.n, dtype=np.int64), np.diff(g.out_indptr))
    du = dist[rows]
    dv = dist[g.out_indices]
    cross = (du >= 0) & (dv == du + 1)
    boundary = np.bincount(du[cross], minlength=r_top + 1)[:r_top + 1]
    return BallProfile(center=u, sizes=sizes, boundary_edges=boundary)


@dataclass
class ComponentInfo:
    """Connected-component labels, and the size of the largest one."""
    component_id: np.ndarray
    largest_size: int
    largest_fraction: float
    num_components: int

    def largest_members(self):
        largest_label = int(np.argmax(np.bincount(self.component_id)))
        return np.flatnonzero(self.component_id == largest_label).astype(np.int32)


def largest_component(g):
    """Component partition; directed graphs use weakly-connected components.

    Labels are assigned in order of smallest member id, so among equally
    large components the one containing the lowest node id is reported
    first (deterministic tie-break).
    """
    if g.directed:
        # Weak connectivity: union of out- and in-adjacency.
        rows = np.concatenate([
            np.repeat(np.arange(g.n, dtype=np.int64), np.diff(g.out_indptr)),
            np.repeat(np.arange(g.n, dtype=np.int64), np.diff(g.in_indptr)),
        ])
        cols = np.concatenate([g.out_indices.astype(np.int64),
                               g.in_indices.astype(np.int64)])
        indptr, indices = _csr_from_pairs(g.n, rows, cols)
    else:
        indptr, indices = g.out_indptr, g.out_indices
    labels = np.empty(g.n, np.int32)
    ncomp = _kernels.component_labels(indptr, indices, labels)
    sizes = np.bincount(labels, minlength=ncomp)
    largest = int(sizes.max())
    return ComponentInfo(component_id=labels, largest_size=largest,
                         largest_fraction=largest / g.n,
                         num_components=ncomp)


@dataclass
class DegreeHistogram:
    """Degree -> node count. For directed graphs, total = out + in per node,
    with per-direction histograms alongside."""
    total: dict = field(default_factory=dict)
    out_deg: dict | None = None
    in_deg: dict | None = None


def _hist(values):
    counts = np.bincount(values)
    return {int(d): int(c) for d, c in enumerate(counts) if c}


def degree_histogram(g):
    """Histogram of node degrees; counts sum to n in every map."""
    out = np.diff(g.out_indptr).astype(np.int64)
    if not g.directed:
        return DegreeHistogram(total=_hist(out))
    inn = np.diff(g.in_indptr).astype(np.int64)
    return DegreeHistogram(total=_hist(out + inn), out_deg=_hist(out),
                           in_deg=_hist(inn))
