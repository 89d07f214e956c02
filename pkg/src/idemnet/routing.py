"""Beacon-based approximate shortest paths and compact port/header routing.

One landmark ("beacon") reduces all-pairs routing to two single-source
trees: route a -> beacon -> b and accept the stretch. Three realizations
are provided: in-memory tables (:func:`build_beacon_tables`), a
synchronous distributed relaxation that converges to the same tables
(:func:`distributed_beacon_sim`), and a message-level scheme where
non-beacon nodes store a single output port and the beacon stores one
(predecessor, port) entry per node (:func:`compact_scheme_build`), with
exact bit accounting of that state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .graph import Graph, UNREACHABLE, bfs_distances, largest_component
from .rng import make_rng, STREAM_PAIRS, STREAM_BEACONS

_NO_NODE = -1


class RoutingError(RuntimeError):
    """Raised when a requested route cannot be produced."""


class UnroutableError(RoutingError):
    """Source or destination cannot reach the beacon."""


def _parents_toward(g, dist, reverse):
    """parent[u] = smallest neighbor one step closer to the tree root.

    ``reverse=False`` selects among out-neighbors (next hop when walking
    toward the root); ``reverse=True`` among in-neighbors (predecessor on
    the root's outbound tree).
    """
    indptr = g.out_indptr if not reverse else g.in_indptr
    indices = g.out_indices if not reverse else g.in_indices
    rows = np.repeat(np.arange(g.n, dtype=np.int64), np.diff(indptr))
    cols = indices.astype(np.int64)
    ok = (dist[rows] > 0) & (dist[cols] == dist[rows] - 1)
    parent = np.full(g.n, np.int64(g.n))
    np.minimum.at(parent, rows[ok], cols[ok])
    parent[parent == g.n] = _NO_NODE
    return parent.astype(np.int32)


@dataclass
class BeaconTables:
    """Next-hop and distance state for one beacon.

    ``to_beacon[u]`` is u's first hop on a shortest path to the beacon,
    ``from_beacon[v]`` is v's predecessor on the beacon's shortest-path
    out-tree; both use smallest-neighbor-id tie-breaks so every table is
    deterministic. Distances carry :data:`~idemnet.graph.UNREACHABLE`
    where no path exists.
    """
    beacon: int
    dist_to: np.ndarray
    dist_from: np.ndarray
    to_beacon: np.ndarray
    from_beacon: np.ndarray


def build_beacon_tables(g, beacon):
    """Forward and reverse shortest-path trees rooted at ``beacon``."""
    if not 0 <= beacon < g.n:
        raise ValueError(f"beacon {beacon} out of range for n={g.n}")
    dist_from = bfs_distances(g, beacon, "forward").dist
    dist_to = bfs_distances(g, beacon, "reverse").dist if g.directed else dist_from
    to_beacon = _parents_toward(g, dist_to, reverse=False)
    from_beacon = _parents_toward(g, dist_from, reverse=True)
    return BeaconTables(beacon=beacon, dist_to=dist_to, dist_from=dist_from,
                        to_beacon=to_beacon, from_beacon=from_beacon)


@dataclass
class RoutedPath:
    """Concrete node sequence produced by beacon routing."""
    nodes: list
    via_beacon: bool

    @property
    def length(self):
        return len(self.nodes) - 1


def beacon_route(tables, a, b, trim_common=False):
    """Route a -> beacon -> b by concatenating the two tree paths.

    The returned length is exactly dist_to(a) + dist_from(b): no shortcut
    detection is applied, because the stretch claim under test is about
    the plain concatenation. ``trim_common=True`` optionally drops the
    redundant back-and-forth when both legs traverse the same nodes
    around the beacon. ``a == b`` returns the empty path.
    """
    if a == b:
        return RoutedPath(nodes=[a], via_beacon=False)
    if tables.dist_to[a] == UNREACHABLE or tables.dist_from[b] == UNREACHABLE:
        raise UnroutableError(f"no beacon route {a} -> {b}")
    up = [a]
    while up[-1] != tables.beacon:
        up.append(int(tables.to_beacon[up[-1]]))
    down = [b]
    while down[-1] != tables.beacon:
        down.append(int(tables.from_beacon[down[-1]]))
    down.reverse()
    nodes = up + down[1:]
    if trim_common:
        k = len(up) - 1  # index of the beacon
        while 0 < k < len(nodes) - 1 and nodes[k - 1] == nodes[k + 1]:
            del nodes[k:k + 2]
            k -= 1
    return RoutedPath(nodes=nodes, via_beacon=True)


@dataclass
class StretchReport:
    """Routed length vs. exact distance over sampled pairs.

    ``stretches`` holds routed/exact for pairs where both are defined;
    pairs whose exact distance is unreachable, or that cannot route via
    the beacon, are excluded and counted separately.
    """
    sampled_pairs: int
    exact: np.ndarray
    routed: np.ndarray
    stretches: np.ndarray
    exact_unreachable: int
    unroutable: int

    def quantile(self, q):
        if self.stretches.size == 0:
            return None
        return float(np.quantile(self.stretches, q))

    def fraction_below(self, threshold):
        """Fraction of measured pairs with stretch <= threshold."""
        if self.stretches.size == 0:
            return 0.0
        return float((self.stretches <= threshold).mean())

    def to_dict(self):
        return {
            "sampled_pairs": self.sampled_pairs,
            "measured_pairs": int(self.stretches.size),
            "exact_unreachable": self.exact_unreachable,
            "unroutable": self.unroutable,
            "stretch_quantiles": {q: self.quantile(float(q))
                                  for q in ("0.5", "0.9", "0.99")},
            "fraction_below": {t: self.fraction_below(float(t))
                               for t in ("2.0", "2.5", "3.0")},
        }


def stretch_report(g, tables, num_pairs, seed):
    """Measure beacon-routing stretch on uniformly sampled pairs.

    Routed length is read off the tables (dist_to(a) + dist_from(b));
    exact distances are computed independently per pair.
    """
    if num_pairs < 1:
        raise ValueError("num_pairs must be >= 1")
    rng = make_rng(seed, STREAM_PAIRS)
    us = rng.integers(0, g.n, size=num_pairs).astype(np.int32)
    vs = rng.integers(0, g.n, size=num_pairs).astype(np.int32)
    while True:
        clash = us == vs
        k = int(clash.sum())
        if k == 0:
            break
        vs[clash] = rng.integers(0, g.n, size=k)
    exact = _kernels.pair_distances(g.out_indptr, g.out_indices,
                                    g.in_indptr, g.in_indices, us, vs)
    routed_to = tables.dist_to[us]
    routed_from = tables.dist_from[vs]
    routable = (routed_to != UNREACHABLE) & (routed_from != UNREACHABLE)
    finite = exact != UNREACHABLE
    ok = finite & routable
    routed = (routed_to + routed_from).astype(np.int64)
    stretches = routed[ok] / exact[ok]
    return StretchReport(
        sampled_pairs=num_pairs,
        exact=exact[ok], routed=routed[ok], stretches=stretches,
        exact_unreachable=int((~finite).sum()),
        unroutable=int((finite & ~routable).sum()),
    )


@dataclass
class DistributedSimReport:
    """Outcome of the synchronous distance-vector relaxation.

    ``rounds_to_fixpoint`` counts rounds through the last one that changed
    any value; ``converged`` says a silent round was observed within the
    budget. ``messages_per_round`` follows the one-value-vector-per-edge-
    per-round accounting, and ``agrees_with_bfs`` compares the fixpoint
    against an independent single-source tree per beacon.
    """
    beacons: list
    rounds_to_fixpoint: int
    converged: bool
    messages_per_round: int
    total_messages: int
    distances: np.ndarray
    next_hop: np.ndarray
    agrees_with_bfs: bool

    def to_dict(self):
        return {
            "beacons": [int(b) for b in self.beacons],
            "rounds_to_fixpoint": self.rounds_to_fixpoint,
            "converged": self.converged,
            "messages_per_round": self.messages_per_round,
            "total_messages": self.total_messages,
            "agrees_with_bfs": self.agrees_with_bfs,
        }


_BIG = np.int64(2**40)


def distributed_beacon_sim(g, beacons=None, beacon_probability=None,
                           max_rounds=1_000, seed=0):
    """Bulk-synchronous distance-vector computation of per-beacon tables.

    Each node holds a (distance, next hop) entry per beacon and each round
    relaxes every entry against all neighbors' previous-round values, so
    results are independent of intra-round scheduling. Beacons are given
    explicitly or sampled node-wise with ``beacon_probability``.
    """
    if g.directed:
        raise ValueError("the distributed variant assumes an undirected graph")
    if max_rounds < 1:
        raise ValueError("max_rounds must be >= 1")
    if beacons is None:
        if beacon_probability is None:
            beacon_probability = math.log(g.n) / g.n
        rng = make_rng(seed, STREAM_BEACONS)
        beacons = np.flatnonzero(rng.random(g.n) < beacon_probability)
        if beacons.size == 0:
            raise ValueError("no beacons sampled; pass explicit beacons or "
                             "a different seed/probability")
    beacons = [int(b) for b in beacons]

    nb = len(beacons)
    dist = np.full((nb, g.n), _BIG, np.int64)
    for i, b in enumerate(beacons):
        dist[i, b] = 0

    indptr, indices = g.out_indptr, g.out_indices
    has_nbrs = np.diff(indptr) > 0
    # reduceat offsets must stay in range even when trailing rows are empty.
    offsets = np.minimum(indptr[:-1], max(indices.size - 1, 0))
    rounds = 0
    converged = False
    for rnd in range(1, max_rounds + 1):
        new = dist.copy()
        for i in range(nb):
            if indices.size:
                best = np.minimum.reduceat(dist[i][indices], offsets)
                best = np.where(has_nbrs, best, _BIG)
            else:
                best = np.full(g.n, _BIG, np.int64)
            np.minimum(new[i], best + 1, out=new[i])
        if np.array_equal(new, dist):
            converged = True
            break
        dist = new
        rounds = rnd
    dist = np.where(dist >= _BIG, np.int64(UNREACHABLE), dist)

    # Next hops from the fixpoint, same smallest-id rule as the tables.
    next_hop = np.full((nb, g.n), _NO_NODE, np.int32)
    rows = np.repeat(np.arange(g.n, dtype=np.int64), np.diff(indptr))
    cols = indices.astype(np.int64)
    for i in range(nb):
        d = dist[i]
        ok = (d[rows] > 0) & (d[cols] == d[rows] - 1)
        hop = np.full(g.n, np.int64(g.n))
        np.minimum.at(hop, rows[ok], cols[ok])
        hop[hop == g.n] = _NO_NODE
        next_hop[i] = hop.astype(np.int32)

    agrees = all(
        np.array_equal(dist[i], bfs_distances(g, b).dist.astype(np.int64))
        for i, b in enumerate(beacons))
    return DistributedSimReport(
        beacons=beacons, rounds_to_fixpoint=rounds, converged=converged,
        messages_per_round=g.num_edges,
        total_messages=g.num_edges * rounds,
        distances=dist, next_hop=next_hop, agrees_with_bfs=agrees)


# ---------------------------------------------------------------------------
# Compact port/header scheme
# ---------------------------------------------------------------------------

@dataclass
class CompactScheme:
    """Port-level routing state: one stored port per non-beacon node, and a
    (predecessor, predecessor's port) entry per node at the beacon.

    Ports number each node's incident edges 1..deg(u) in sorted adjacency
    order. Memory is accounted as the exact bit width of these tables:
    node ids at ceil(log2 n) bits and ports at ceil(log2 max_degree) bits.
    """
    graph: Graph
    beacon: int
    parent: np.ndarray
    port_to_parent: np.ndarray
    pred_port_at_pred: np.ndarray
    dist_from_beacon: np.ndarray
    id_bits: int
    port_bits: int


def _port_of(g, u, v):
    """1-based port number of edge (u, v) at u (sorted adjacency order)."""
    nbrs = g.out_neighbors(u)
    k = int(np.searchsorted(nbrs, v))
    return k + 1


def compact_scheme_build(g, beacon):
    """Build the compact scheme over a connected undirected graph."""
    if g.directed:
        raise ValueError("the compact scheme is defined for undirected graphs")
    if not 0 <= beacon < g.n:
        raise ValueError(f"beacon {beacon} out of range for n={g.n}")
    comp = largest_component(g)
    if comp.num_components != 1:
        raise ValueError("the compact scheme needs a connected graph")
    dist = bfs_distances(g, beacon).dist
    parent = _parents_toward(g, dist, reverse=False)

    rows = np.repeat(np.arange(g.n, dtype=np.int64), np.diff(g.out_indptr))
    cols = g.out_indices.astype(np.int64)
    # Port number of each arc (row -> col) at its row endpoint.
    port_no = (np.arange(cols.size, dtype=np.int64)
               - g.out_indptr[rows] + 1)

    # port_to_parent[u]: u's port for the edge toward its parent.
    port_to_parent = np.zeros(g.n, np.int64)
    sel = parent[rows] == cols
    port_to_parent[rows[sel]] = port_no[sel]

    # pred_port_at_pred[v]: parent(v)'s port for the edge back down to v.
    pred_port = np.zeros(g.n, np.int64)
    sel = parent[cols] == rows
    pred_port[cols[sel]] = port_no[sel]

    max_deg = int(np.diff(g.out_indptr).max())
    return CompactScheme(
        graph=g, beacon=beacon, parent=parent,
        port_to_parent=port_to_parent, pred_port_at_pred=pred_port,
        dist_from_beacon=dist,
        id_bits=math.ceil(math.log2(g.n)),
        port_bits=math.ceil(math.log2(max_deg)) if max_deg > 1 else 1,
    )


@dataclass
class MemoryReport:
    """Exact bit accounting of the stored routing tables."""
    per_node_bits: np.ndarray
    total_bits: int
    n: int
    implied_constant: float

    def to_dict(self):
        return {
            "n": self.n,
            "total_bits": self.total_bits,
            "implied_constant": self.implied_constant,
            "per_node_bits": [int(b) for b in self.per_node_bits],
        }


def memory_account(scheme):
    """Bits per node and in total, plus total / (n log2 n).

    Non-beacon nodes store one port; the beacon stores, for every other
    node, a predecessor id and that predecessor's port.
    """
    g = scheme.graph
    per_node = np.full(g.n, scheme.port_bits, np.int64)
    per_node[scheme.beacon] = (g.n - 1) * (scheme.id_bits + scheme.port_bits)
    total = int(per_node.sum())
    return MemoryReport(per_node_bits=per_node, total_bits=total, n=g.n,
                        implied_constant=total / (g.n * math.log2(g.n)))


@dataclass
class TraceStep:
    node: int
    in_port: int
    header: str
    out_port: int


@dataclass
class TraceResult:
    """Message trace of the two-phase port/header protocol.

    Phase 0 carries (destination, 0) up the stored ports to the beacon;
    there the header becomes the remaining port list with phase bit 1,
    shrinking by one port per hop until the destination pops the last one.
    """
    source: int
    destination: int
    steps: list
    delivered: bool
    hops: int

    def dump(self):
        """One step per line: ``node in_port header_summary out_port``."""
        return "\n".join(f"{s.node} {s.in_port} {s.header} {s.out_port}"
                         for s in self.steps)


def compact_route_sim(scheme, u, v, max_hops=None):
    """Simulate message forwarding from ``u`` to ``v`` port by port.

    Every hop consults only the local stored state: a non-beacon node in
    phase 0 forwards to its single stored port; the beacon expands the
    destination into the port list of the tree path; phase-1 nodes pop
    one port. A malformed scheme would surface as a stuck or misdelivered
    trace (``delivered=False``), never as silent corruption.
    """
    g = scheme.graph
    if not (0 <= u < g.n and 0 <= v < g.n):
        raise ValueError("endpoints out of range")
    if max_hops is None:
        max_hops = 4 * g.n + 8
    steps = []
    if u == v:
        return TraceResult(source=u, destination=v, steps=steps,
                           delivered=True, hops=0)

    node = u
    in_port = 0
    phase = 0
    ports = None  # phase-1 remaining port list
    hops = 0
    while hops <= max_hops:
        if phase == 0 and node == scheme.beacon:
            phase = 1
            ports = _tree_ports(scheme, v)
        if phase == 0:
            header = f"D:{v}:0"
            out_port = int(scheme.port_to_parent[node])
            if out_port == 0:
                steps.append(TraceStep(node, in_port, header, 0))
                return TraceResult(u, v, steps, delivered=False, hops=hops)
        else:
            header = f"P:{len(ports)}:1"
            if not ports:
                steps.append(TraceStep(node, in_port, header, 0))
                return TraceResult(u, v, steps, delivered=(node == v), hops=hops)
            out_port = ports.pop(0)
        steps.append(TraceStep(node, in_port, header, out_port))
        nxt = int(g.out_neighbors(node)[out_port - 1])
        in_port = _port_of(g, nxt, node)
        node = nxt
        hops += 1
    return TraceResult(u, v, steps, delivered=False, hops=hops)


def _tree_ports(scheme, v):
    """Port list q_0.. that walks the spanning tree from the beacon to v."""
    if v == scheme.beacon:
        return []
    rev = []
    node = v
    while node != scheme.beacon:
        rev.append(int(scheme.pred_port_at_pred[node]))
        node = int(scheme.parent[node])
        if node == _NO_NODE:
            raise RoutingError(f"node {v} is not on the beacon tree")
    rev.reverse()
    return rev
