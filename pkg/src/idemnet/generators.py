"""Seeded generators for the network models under study.

Every generator is a pure function of its parameters and a 64-bit seed:
identical inputs give byte-identical edge sets on every platform. Stream
usage is documented per generator; the torus model draws each node's
long-range contacts from that node's own child stream (see :mod:`.rng`),
so its output is independent of generation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .graph import Graph, build_graph
from .rng import make_rng, node_rng

ERDOS_RENYI = "erdos_renyi"
WATTS_STROGATZ = "watts_strogatz"
KLEINBERG = "kleinberg"
BARABASI_ALBERT = "barabasi_albert"
CONFIGURATION = "configuration"

MODELS = (ERDOS_RENYI, WATTS_STROGATZ, KLEINBERG, BARABASI_ALBERT, CONFIGURATION)

_PARAM_NAMES = {
    ERDOS_RENYI: {"mean_degree"},
    WATTS_STROGATZ: {"m", "p_rewire"},
    KLEINBERG: {"r", "p_local", "q_long"},
    BARABASI_ALBERT: {"m_attach"},
    CONFIGURATION: {"tau"},
}


@dataclass(frozen=True)
class ModelSpec:
    """Declarative description of one generator run: model + parameters + seed."""
    model: str
    n: int
    seed: int
    params: dict

    def with_size(self, n, seed=None):
        """Same model at a different size (and optionally a fresh seed)."""
        return replace(self, n=n, seed=self.seed if seed is None else seed)

    def describe(self):
        parts = [f"{k}={self.params[k]}" for k in sorted(self.params)]
        return f"{self.model}(n={self.n}, {', '.join(parts)}, seed={self.seed})"


def validate_spec(spec):
    """Raise ValueError unless ``spec`` satisfies the model's parameter ranges."""
    if spec.model not in MODELS:
        raise ValueError(f"unknown model {spec.model!r}; expected one of {MODELS}")
    if spec.n < 2:
        raise ValueError(f"need n >= 2, got {spec.n}")
    names = _PARAM_NAMES[spec.model]
    if set(spec.params) != names:
        raise ValueError(f"{spec.model} expects params {sorted(names)}, "
                         f"got {sorted(spec.params)}")
    p = spec.params
    n = spec.n
    if spec.model == ERDOS_RENYI:
        if not 0 < p["mean_degree"] <= n - 1:
            raise ValueError(f"mean_degree must be in (0, n-1], got {p['mean_degree']}")
    elif spec.model == WATTS_STROGATZ:
        if not (1 <= p["m"] < n / 2 and float(p["m"]).is_integer()):
            raise ValueError(f"need integer 1 <= m < n/2, got m={p['m']}")
        if not 0 <= p["p_rewire"] <= 1:
            raise ValueError(f"p_rewire must be in [0, 1], got {p['p_rewire']}")
    elif spec.model == KLEINBERG:
        s = math.isqrt(n)
        if s * s != n:
            raise ValueError(f"kleinberg needs a perfect-square n, got {n}")
        if not 0 <= p["r"] < 2:
            raise ValueError(f"r must be in [0, 2), got {p['r']}")
        for name in ("p_local", "q_long"):
            if not (p[name] >= 1 and float(p[name]).is_integer()):
                raise ValueError(f"{name} must be an integer >= 1, got {p[name]}")
    elif spec.model == BARABASI_ALBERT:
        if not (p["m_attach"] >= 1 and float(p["m_attach"]).is_integer()):
            raise ValueError(f"m_attach must be an integer >= 1, got {p['m_attach']}")
        if n <= p["m_attach"]:
            raise ValueError(f"need n > m_attach, got n={n}, m_attach={p['m_attach']}")
    elif spec.model == CONFIGURATION:
        if not p["tau"] > 2:
            raise ValueError(f"tau must be > 2, got {p['tau']}")


def generate(spec):
    """Generate the graph described by ``spec`` (validated first)."""
    validate_spec(spec)
    p = spec.params
    if spec.model == ERDOS_RENYI:
        return gen_erdos_renyi(spec.n, p["mean_degree"], spec.seed)
    if spec.model == WATTS_STROGATZ:
        return gen_watts_strogatz(spec.n, int(p["m"]), p["p_rewire"], spec.seed)
    if spec.model == KLEINBERG:
        return gen_kleinberg(spec.n, p["r"], int(p["p_local"]), int(p["q_long"]),
                             spec.seed)
    if spec.model == BARABASI_ALBERT:
        return gen_barabasi_albert(spec.n, int(p["m_attach"]), spec.seed)
    return gen_configuration(spec.n, p["tau"], spec.seed)


GraphFamily = Callable[[int, int], Graph]


def family_from_spec(spec):
    """(n, seed) -> Graph callable for size scans over one model."""
    def fam(n, seed):
        return generate(spec.with_size(n, seed))
    return fam


# ---------------------------------------------------------------------------
# Erdos-Renyi G(n, p)
# ---------------------------------------------------------------------------

def _row_start(n, u):
    return u * (2 * n - u - 1) // 2


def _pair_from_linear(n, idx):
    """Invert the row-major enumeration of pairs u < v over n nodes."""
    b = 2 * n - 1
    u = np.floor((b - np.sqrt(b * b - 8 * idx.astype(np.float64))) / 2)
    u = np.clip(u, 0, n - 2).astype(np.int64)
    # Exact integer correction of any float rounding at row boundaries.
    while True:
        low = idx < _row_start(n, u)
        if not low.any():
            break
        u[low] -= 1
    while True:
        high = idx >= _row_start(n, u + 1)
        if not high.any():
            break
        u[high] += 1
    v = idx - _row_start(n, u) + u + 1
    return u, v


def gen_erdos_renyi(n, mean_degree, seed):
    """G(n, p) with p = mean_degree / (n - 1), each pair independent.

    Sampled with geometric skips over the pair enumeration, so the cost is
    proportional to the number of edges, not pairs. mean_degree = n - 1
    gives p = 1, the complete graph.
    """
    if not 0 < mean_degree <= n - 1:
        raise ValueError(f"mean_degree must be in (0, n-1], got {mean_degree}")
    p = mean_degree / (n - 1)
    total = n * (n - 1) // 2
    if p >= 1.0:
        u, v = np.triu_indices(n, k=1)
        return build_graph(n, np.column_stack([u, v]).astype(np.int64))
    rng = make_rng(seed)
    picked = []
    pos = -1
    while True:
        want = max(1024, min(int((total - pos) * p * 1.1), 4_000_000))
        skips = rng.geometric(p, size=want)
        steps = np.cumsum(skips) + pos
        inside = steps[steps < total]
        picked.append(inside)
        if inside.size < steps.size:
            break
        pos = int(steps[-1])
    idx = np.concatenate(picked)
    u, v = _pair_from_linear(n, idx)
    return build_graph(n, np.column_stack([u, v]))


# ---------------------------------------------------------------------------
# Watts-Strogatz ring rewiring
# ---------------------------------------------------------------------------

@dataclass
class WsTrace:
    """Per-edge rewiring record: edge e = i*m + (k-1) has fixed node i.

    ``partner[e]`` is the other endpoint after rewiring and ``rewired[e]``
    says whether the original lattice partner was replaced.
    """
    fixed: np.ndarray
    partner: np.ndarray
    rewired: np.ndarray


def gen_watts_strogatz(n, m, p_rewire, seed):
    """Ring lattice of m neighbors each side, rewired edge by edge."""
    g, _ = gen_watts_strogatz_with_meta(n, m, p_rewire, seed)
    return g


def gen_watts_strogatz_with_meta(n, m, p_rewire, seed):
    """Watts-Strogatz graph plus its rewiring trace.

    Construction: start from the ring lattice (edge iff circular distance
    <= m), then visit nodes 0..n-1 and for each node its rightward offsets
    1..m in turn; each such edge (i, j) is independently rewired with
    probability p_rewire to (i, k), with k drawn uniformly and redrawn
    until it creates neither a self-loop nor a multi-edge. Node i stays
    recorded as the edge's fixed node either way. Stream use: the n*m
    rewire decisions are drawn as one block in visit order, then
    replacement targets are drawn from a pooled stream in process order.
    """
    if not 1 <= m < n / 2:
        raise ValueError(f"need 1 <= m < n/2, got m={m}, n={n}")
    if not 0 <= p_rewire <= 1:
        raise ValueError(f"p_rewire must be in [0, 1], got {p_rewire}")
    rng = make_rng(seed)
    adj = [set() for _ in range(n)]
    for i in range(n):
        for k in range(1, m + 1):
            j = (i + k) % n
            adj[i].add(j)
            adj[j].add(i)

    fixed = np.repeat(np.arange(n, dtype=np.int64), m)
    partner = (fixed + np.tile(np.arange(1, m + 1, dtype=np.int64), n)) % n
    rewired = np.zeros(n * m, bool)
    decide = rng.random(n * m) < p_rewire

    pool = rng.integers(0, n, size=max(1024, int(n * m * p_rewire * 1.2) + 64))
    pi = 0
    e = 0
    for i in range(n):
        ai = adj[i]
        for k in range(1, m + 1):
            # a node already adjacent to everyone has no valid target and
            # keeps its edge
            if decide[e] and len(ai) < n - 1:
                j = (i + k) % n
                while True:
                    if pi >= pool.size:
                        pool = rng.integers(0, n, size=1 << 16)
                        pi = 0
                    t = int(pool[pi])
                    pi += 1
                    if t != i and t not in ai:
                        break
                ai.remove(j)
                adj[j].remove(i)
                ai.add(t)
                adj[t].add(i)
                partner[e] = t
                rewired[e] = True
            e += 1
    g = build_graph(n, np.column_stack([fixed, partner]))
    assert g.num_edges == n * m
    return g, WsTrace(fixed=fixed, partner=partner, rewired=rewired)


# ---------------------------------------------------------------------------
# Torus (Kleinberg-style lattice + long-range contacts)
# ---------------------------------------------------------------------------

def node_to_coord(n, u):
    """Node id -> 1-based (x, y) on the sqrt(n) x sqrt(n) torus (row-major)."""
    s = math.isqrt(n)
    return u // s + 1, u % s + 1


def coord_to_node(n, x, y):
    s = math.isqrt(n)
    return (x - 1) * s + (y - 1)


def kleinberg_lattice_distance(n, u, v):
    """Periodic-boundary L1 distance between nodes of the torus."""
    s = math.isqrt(n)
    if s * s != n:
        raise ValueError(f"n must be a perfect square, got {n}")
    dx = abs(u // s - v // s)
    dy = abs(u % s - v % s)
    return min(dx, s - dx) + min(dy, s - dy)


def torus_distance_classes(s):
    """Count of nodes at each lattice distance d >= 1 from any fixed node.

    Returns an array ``count`` with ``count[d]`` the class size; by torus
    symmetry it is the same for every center.
    """
    axis = np.zeros(s // 2 + 1, np.int64)
    axis[0] = 1
    for a in range(1, s // 2 + 1):
        axis[a] = 1 if (s % 2 == 0 and a == s // 2) else 2
    dmax = 2 * (s // 2)
    count = np.zeros(dmax + 1, np.int64)
    for a in range(s // 2 + 1):
        for b in range(s // 2 + 1):
            count[a + b] += axis[a] * axis[b]
    count[0] = 0  # exclude the center itself
    return count


class KleinbergLongRange:
    """Long-range contact distribution on the torus: P(v) ~ d(u, v)^-r.

    The torus is decomposed into distance classes (all nodes at lattice
    distance d), so sampling picks a class by aggregate weight and then a
    uniform member. The normalizing constant Z over v != u is identical
    for every u by symmetry. With r = 0 the center itself is a permitted
    target (0^0 = 1), making the draw uniform over all n nodes.
    """

    def __init__(self, n, r):
        s = math.isqrt(n)
        if s * s != n:
            raise ValueError(f"n must be a perfect square, got {n}")
        self.n = n
        self.s = s
        self.r = r
        count = torus_distance_classes(s)
        d = np.arange(len(count), dtype=np.float64)
        with np.errstate(divide="ignore"):
            w = count * np.where(d > 0, d ** (-r), 0.0)
        if r == 0:
            w[0] = 1.0  # the center, by the 0^0 = 1 convention
        self.class_counts = count
        self.weights = w
        self.cum_weights = np.cumsum(w)
        self.z = float(w[1:].sum())  # sum over v != u
        # Offsets (dx, dy) grouped by wrapped distance; each offset is a
        # distinct target node.
        dx = np.arange(s)
        wrap = np.minimum(dx, s - dx)
        dist = wrap[:, None] + wrap[None, :]
        dist[0, 0] = -1
        self._offsets = []
        for dd in range(len(count)):
            xs, ys = np.nonzero(dist == dd)
            self._offsets.append(np.column_stack([xs, ys]).astype(np.int64))

    def sample(self, rng, u, size=1):
        """Draw ``size`` contacts for node ``u`` from ``rng`` (two draws each)."""
        s = self.s
        ux, uy = u // s, u % s
        total = self.cum_weights[-1]
        out = np.empty(size, np.int64)
        for i in range(size):
            t = rng.random() * total
            d = int(np.searchsorted(self.cum_weights, t, side="right"))
            d = min(d, len(self.class_counts) - 1)
            if d == 0:
                out[i] = u
                continue
            members = self._offsets[d]
            j = int(rng.integers(0, members.shape[0]))
            dx, dy = members[j]
            out[i] = ((ux + dx) % s) * s + (uy + dy) % s
        return out


@dataclass
class KleinbergTrace:
    """Raw long-range trial count vs. distinct arcs kept after collapsing."""
    raw_trials: int
    distinct_longrange_arcs: int


def gen_kleinberg(n, r, p_local, q_long, seed):
    """Directed torus graph: local arcs within lattice distance p_local plus
    q_long long-range arcs per node with P(v) ~ d(u, v)^-r."""
    g, _ = gen_kleinberg_with_meta(n, r, p_local, q_long, seed)
    return g


def gen_kleinberg_with_meta(n, r, p_local, q_long, seed):
    """Kleinberg-style torus graph plus its trial-count trace.

    A node's q_long trials are independent and may repeat targets or hit
    local contacts; duplicates collapse in the returned graph (distances
    are unaffected) and the raw trial count is reported in the trace.
    Each node's trials come from its own child stream of ``seed``.
    """
    s = math.isqrt(n)
    if s * s != n:
        raise ValueError(f"n must be a perfect square, got {n}")
    if not 0 <= r < 2:
        raise ValueError(f"r must be in [0, 2), got {r}")
    if p_local < 1 or q_long < 1:
        raise ValueError("p_local and q_long must be >= 1")

    # Local arcs: one vectorized translation per in-range offset.
    dxs = np.arange(s)
    wrap = np.minimum(dxs, s - dxs)
    dist = wrap[:, None] + wrap[None, :]
    dist[0, 0] = -1
    offs = np.column_stack(np.nonzero((dist >= 0) & (dist <= p_local)))
    ids = np.arange(n, dtype=np.int64)
    ux, uy = ids // s, ids % s
    chunks = []
    for dx, dy in offs:
        tgt = ((ux + dx) % s) * s + (uy + dy) % s
        chunks.append(np.column_stack([ids, tgt]))

    dist_lr = KleinbergLongRange(n, r)
    lr = np.empty((n, q_long), np.int64)
    for u in range(n):
        lr[u] = dist_lr.sample(node_rng(seed, u), u, q_long)
    chunks.append(np.column_stack([np.repeat(ids, q_long), lr.reshape(-1)]))

    edges = np.concatenate(chunks)
    g = build_graph(n, edges, directed=True, allow_self_loops=(r == 0))
    local_arcs = n * len(offs)
    trace = KleinbergTrace(raw_trials=n * q_long,
                           distinct_longrange_arcs=g.num_edges - local_arcs)
    return g, trace


# ---------------------------------------------------------------------------
# Preferential attachment
# ---------------------------------------------------------------------------

def gen_barabasi_albert(n, m_attach, seed):
    """Sequential growth: each new node attaches to m_attach existing nodes
    chosen proportional to current degree (duplicate picks redrawn).

    Starts from a clique on m_attach + 1 nodes; the mean degree tends to
    2 * m_attach with the only deficit coming from that seed clique.
    """
    m = int(m_attach)
    if m < 1 or n <= m:
        raise ValueError(f"need m_attach >= 1 and n > m_attach, got {m}, {n}")
    rng = make_rng(seed)
    edges = []
    endpoints = []  # one entry per edge endpoint: index = degree weight
    for a in range(m + 1):
        for b in range(a + 1, m + 1):
            edges.append((a, b))
            endpoints.append(a)
            endpoints.append(b)
    for i in range(m + 1, n):
        chosen = set()
        while len(chosen) < m:
            t = endpoints[int(rng.integers(0, len(endpoints)))]
            chosen.add(t)
        for t in sorted(chosen):
            edges.append((i, t))
            endpoints.append(i)
            endpoints.append(t)
    return build_graph(n, np.asarray(edges, dtype=np.int64))


# ---------------------------------------------------------------------------
# Configuration model with power-law degrees
# ---------------------------------------------------------------------------

def gen_configuration(n, tau, seed):
    """I.i.d. degrees with P(D >= d) = d^(1 - tau), stubs matched uniformly.

    The degree sum is made even by adding one stub to node 0; self-loops
    and multi-edges produced by the matching are discarded at build time.
    """
    if not tau > 2:
        raise ValueError(f"tau must be > 2, got {tau}")
    rng = make_rng(seed)
    u = rng.random(n)
    degrees = np.floor(u ** (-1.0 / (tau - 1))).astype(np.int64)
    degrees = np.clip(degrees, 1, n - 1)
    if degrees.sum() % 2 == 1:
        degrees[0] += 1
    stubs = np.repeat(np.arange(n, dtype=np.int64), degrees)
    rng.shuffle(stubs)
    a = stubs[0::2]
    b = stubs[1::2]
    keep = a != b
    return build_graph(n, np.column_stack([a[keep], b[keep]]))


# ---------------------------------------------------------------------------
# Random regular graphs (test workhorse for expander-style behavior)
# ---------------------------------------------------------------------------

def gen_random_regular(n, degree, seed, max_tries=500):
    """Uniform-ish simple d-regular graph by stub pairing with rejection."""
    if n * degree % 2 != 0:
        raise ValueError(f"n * degree must be even, got n={n}, degree={degree}")
    if degree >= n:
        raise ValueError(f"degree must be < n, got {degree}")
    rng = make_rng(seed)
    stubs = np.repeat(np.arange(n, dtype=np.int64), degree)
    for _ in range(max_tries):
        perm = rng.permutation(stubs)
        a, b = perm[0::2], perm[1::2]
        if (a == b).any():
            continue
        key = np.minimum(a, b) * n + np.maximum(a, b)
        if np.unique(key).size != key.size:
            continue
        return build_graph(n, np.column_stack([a, b]))
    raise RuntimeError(f"no simple {degree}-regular pairing in {max_tries} tries")
