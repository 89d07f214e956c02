"""Shared builders and independent oracles for the test suite.

The oracles here (Floyd-Warshall, union-find, set-based edge cuts) are
deliberately naive and share no code with the library's traversal
kernels, so agreement between the two is meaningful.
"""

import numpy as np

from idemnet.graph import build_graph
from idemnet.rng import make_rng

INF = float("inf")


# -- small graph builders ----------------------------------------------------

def path_graph(n):
    return build_graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n):
    return build_graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n):
    return build_graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def star_graph(n):
    return build_graph(n, [(0, i) for i in range(1, n)])


def two_triangles():
    return build_graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])


def disjoint_cliques(n):
    """Two cliques of n // 2 nodes each (no edges between them)."""
    half = n // 2
    edges = [(i, j) for i in range(half) for j in range(i + 1, half)]
    edges += [(half + i, half + j)
              for i in range(half) for j in range(i + 1, half)]
    return build_graph(2 * half, edges)


def random_graph(n, num_edges, seed, directed=False):
    rng = make_rng(seed)
    u = rng.integers(0, n, size=num_edges)
    v = rng.integers(0, n, size=num_edges)
    keep = u != v
    return build_graph(n, np.column_stack([u[keep], v[keep]]),
                       directed=directed)


# -- independent oracles -----------------------------------------------------

def floyd_warshall(g):
    """All-pairs hop distances by the cubic recurrence; inf = unreachable."""
    n = g.n
    d = [[INF] * n for _ in range(n)]
    for i in range(n):
        d[i][i] = 0
    for u in range(n):
        for v in g.out_neighbors(u):
            d[u][int(v)] = 1
    for k in range(n):
        dk = d[k]
        for i in range(n):
            dik = d[i][k]
            if dik == INF:
                continue
            di = d[i]
            for j in range(n):
                alt = dik + dk[j]
                if alt < di[j]:
                    di[j] = alt
    return d


def union_find_components(n, edges):
    """Component sizes via a plain union-find over the edge list."""
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edges:
        ru, rv = find(int(u)), find(int(v))
        if ru != rv:
            parent[ru] = rv
    sizes = {}
    for x in range(n):
        r = find(x)
        sizes[r] = sizes.get(r, 0) + 1
    return sizes


def ball_sets(g, u):
    """Explicit node sets B_u(r) for r = 0.. until stabilization."""
    balls = [{u}]
    frontier = {u}
    seen = {u}
    while frontier:
        nxt = set()
        for x in frontier:
            for y in g.out_neighbors(x):
                y = int(y)
                if y not in seen:
                    seen.add(y)
                    nxt.add(y)
        if not nxt:
            break
        balls.append(balls[-1] | nxt)
        frontier = nxt
    return balls


def edge_cut_size(g, inside):
    """e(S, complement) counted from explicit sets; undirected edges once."""
    count = 0
    for u in inside:
        for v in g.out_neighbors(u):
            if int(v) not in inside:
                count += 1
    if g.directed:
        return count
    return count  # each crossing edge has exactly one endpoint inside


def edge_hash(g):
    """Stable digest of the canonical edge set (regression golden values)."""
    import hashlib
    h = hashlib.sha256()
    h.update(f"{g.n}:{int(g.directed)}".encode())
    h.update(g.edges().astype("<i8").tobytes())
    return h.hexdigest()[:16]
