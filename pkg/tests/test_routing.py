import math

import numpy as np
import pytest

from idemnet.generators import (gen_erdos_renyi, gen_kleinberg,
                                gen_random_regular, gen_watts_strogatz)
from idemnet.graph import UNREACHABLE, bfs_distances, build_graph
from idemnet.routing import (UnroutableError, beacon_route,
                             build_beacon_tables, compact_route_sim,
                             compact_scheme_build, distributed_beacon_sim,
                             memory_account, stretch_report)

from conftest import (complete_graph, floyd_warshall, path_graph,
                      random_graph, star_graph, two_triangles)


def connected_random_graph(n, num_edges, seed):
    g = random_graph(n, num_edges, seed)
    # splice in a spanning path so the compact scheme applies
    extra = [(i, i + 1) for i in range(n - 1)]
    return build_graph(n, np.vstack([g.edges(), np.array(extra)]))


class TestBeaconTables:
    def test_path_from_end(self):
        t = build_beacon_tables(path_graph(10), 0)
        assert t.dist_to.tolist() == list(range(10))
        assert t.dist_from.tolist() == list(range(10))
        assert t.to_beacon.tolist() == [-1] + list(range(9))

    def test_directed_cycle_asymmetry(self):
        g = build_graph(3, [(0, 1), (1, 2), (2, 0)], directed=True)
        t = build_beacon_tables(g, 0)
        assert t.dist_from[2] == 2
        assert t.dist_to[2] == 1

    def test_unreachable_marked(self):
        g = build_graph(3, [(0, 1)])
        t = build_beacon_tables(g, 0)
        assert t.dist_to[2] == UNREACHABLE
        assert t.to_beacon[2] == -1

    def test_parent_tie_break_smallest(self):
        # both 0 and 1 are at distance 1 from the beacon 2; node 3 must
        # pick neighbor 0
        g = build_graph(4, [(2, 0), (2, 1), (0, 3), (1, 3)])
        t = build_beacon_tables(g, 2)
        assert t.to_beacon[3] == 0
        assert t.from_beacon[3] == 0

    def test_tree_distances_consistent(self):
        g = connected_random_graph(300, 500, seed=4)
        t = build_beacon_tables(g, 7)
        for u in (0, 5, 123, 299):
            hops = 0
            x = u
            while x != 7:
                x = int(t.to_beacon[x])
                hops += 1
            assert hops == t.dist_to[u]

    @pytest.mark.slow
    def test_torus_model_eccentricity_near_scale(self):
        # With r = 0 the long-range arcs make the directed torus expand at
        # rate alpha, so eccentricities sit within a small multiple of
        # log_alpha n.
        from idemnet.analytics import growth_rate, predict_ell
        g = gen_kleinberg(256**2, 0.0, 1, 1, seed=2)
        ell = predict_ell(g.n, growth_rate(1, 1))
        t = build_beacon_tables(g, 12345)
        assert t.dist_to.max() <= 3 * ell
        assert t.dist_from.max() <= 3 * ell


class TestBeaconRoute:
    def test_source_is_beacon_stretch_one(self):
        g = connected_random_graph(100, 200, seed=1)
        t = build_beacon_tables(g, 5)
        p = beacon_route(t, 5, 42)
        assert p.length == t.dist_from[42]
        assert p.nodes[0] == 5 and p.nodes[-1] == 42

    def test_adversarial_beacon_on_path(self):
        t = build_beacon_tables(path_graph(10), 0)
        p = beacon_route(t, 4, 5)
        assert p.length == 9  # 4 up + 5 down, exact distance is 1
        assert p.nodes == [4, 3, 2, 1, 0, 1, 2, 3, 4, 5]

    def test_same_endpoints_empty_path(self):
        t = build_beacon_tables(path_graph(10), 0)
        p = beacon_route(t, 3, 3)
        assert p.length == 0
        assert p.nodes == [3]
        assert not p.via_beacon

    def test_concatenation_length_contract(self):
        g = connected_random_graph(200, 420, seed=2)
        t = build_beacon_tables(g, 0)
        rng = np.random.default_rng(0)
        for _ in range(100):
            a, b = rng.integers(0, g.n, 2)
            if a == b:
                continue
            p = beacon_route(t, int(a), int(b))
            assert p.length == t.dist_to[a] + t.dist_from[b]
            for x, y in zip(p.nodes, p.nodes[1:]):
                assert y in g.out_neighbors(x)

    def test_trim_common_removes_backtrack(self):
        t = build_beacon_tables(path_graph(10), 0)
        p = beacon_route(t, 4, 5, trim_common=True)
        assert p.nodes == [4, 5]

    def test_unroutable_raises(self):
        g = build_graph(4, [(0, 1), (2, 3)])
        t = build_beacon_tables(g, 0)
        with pytest.raises(UnroutableError):
            beacon_route(t, 2, 1)

    def test_stretch_one_when_beacon_on_shortest_path(self):
        # exhaustive check on a small graph against Floyd-Warshall
        g = connected_random_graph(40, 80, seed=9)
        fw = floyd_warshall(g)
        beacon = 3
        t = build_beacon_tables(g, beacon)
        for a in range(g.n):
            for b in range(g.n):
                if a == b:
                    continue
                routed = beacon_route(t, a, b).length
                assert routed >= fw[a][b]
                if fw[a][beacon] + fw[beacon][b] == fw[a][b]:
                    assert routed == fw[a][b]


class TestStretchReport:
    def test_complete_graph_stretch_two(self):
        g = complete_graph(100)
        t = build_beacon_tables(g, 0)
        rep = stretch_report(g, t, 2_000, seed=1)
        assert set(np.unique(rep.stretches)) <= {1.0, 2.0}
        assert rep.fraction_below(2.0) == 1.0
        assert (rep.stretches == 2.0).mean() > 0.9

    def test_lengths_are_table_sums(self):
        g = connected_random_graph(500, 900, seed=3)
        t = build_beacon_tables(g, 11)
        rep = stretch_report(g, t, 1_000, seed=5)
        assert (rep.stretches >= 1.0).all()
        assert rep.exact_unreachable == 0
        assert rep.unroutable == 0

    def test_unreachable_pairs_counted_separately(self):
        g = build_graph(6, [(0, 1), (1, 2), (3, 4), (4, 5)])
        t = build_beacon_tables(g, 0)
        rep = stretch_report(g, t, 500, seed=0)
        assert rep.exact_unreachable > 0
        assert rep.sampled_pairs == 500
        assert rep.stretches.size + rep.exact_unreachable + rep.unroutable == 500

    def test_empty_measurement_reportable(self):
        g = build_graph(4, [(0, 1), (2, 3)])
        t = build_beacon_tables(g, 0)
        rng_hits = stretch_report(g, t, 50, seed=3)
        d = rng_hits.to_dict()  # must not crash even if nothing measured
        assert d["measured_pairs"] + d["exact_unreachable"] + d["unroutable"] == 50

    def test_directed_paths_follow_arc_direction(self):
        g = gen_kleinberg(144, 1.0, 1, 1, seed=5)
        t = build_beacon_tables(g, 7)
        rng = np.random.default_rng(1)
        for _ in range(60):
            a, b = (int(x) for x in rng.integers(0, g.n, 2))
            if a == b:
                continue
            p = beacon_route(t, a, b)
            assert p.length == t.dist_to[a] + t.dist_from[b]
            for x, y in zip(p.nodes, p.nodes[1:]):
                assert y in g.out_neighbors(x)  # every hop is a forward arc


class TestDistributedSim:
    def test_path_converges_at_eccentricity(self):
        rep = distributed_beacon_sim(path_graph(10), beacons=[0],
                                     max_rounds=50)
        assert rep.rounds_to_fixpoint == 9
        assert rep.converged
        assert rep.agrees_with_bfs

    def test_all_nodes_beacons(self):
        g = connected_random_graph(150, 300, seed=1)
        diameter = max(int(bfs_distances(g, u).dist.max()) for u in range(g.n))
        rep = distributed_beacon_sim(g, beacons=list(range(g.n)),
                                     max_rounds=100)
        assert rep.agrees_with_bfs
        assert rep.rounds_to_fixpoint <= diameter

    def test_sampled_beacons_log_rate(self):
        g = gen_erdos_renyi(10_000, 10, seed=4)
        rep = distributed_beacon_sim(
            g, beacon_probability=math.log(g.n) / g.n, max_rounds=100, seed=5)
        assert 1 <= len(rep.beacons) <= 40  # ~ Poisson(9.2)
        assert rep.converged
        assert rep.agrees_with_bfs

    def test_message_accounting(self):
        g = path_graph(10)
        rep = distributed_beacon_sim(g, beacons=[0], max_rounds=50)
        assert rep.messages_per_round == g.num_edges
        assert rep.total_messages == g.num_edges * rep.rounds_to_fixpoint

    def test_next_hops_match_tables(self):
        g = connected_random_graph(120, 260, seed=7)
        rep = distributed_beacon_sim(g, beacons=[3, 77], max_rounds=100)
        from idemnet.routing import build_beacon_tables
        for i, b in enumerate(rep.beacons):
            t = build_beacon_tables(g, b)
            assert np.array_equal(rep.next_hop[i], t.to_beacon)

    def test_non_convergence_reported(self):
        rep = distributed_beacon_sim(path_graph(50), beacons=[0],
                                     max_rounds=3)
        assert not rep.converged
        assert not rep.agrees_with_bfs

    def test_rejects_directed(self):
        g = build_graph(3, [(0, 1), (1, 2)], directed=True)
        with pytest.raises(ValueError):
            distributed_beacon_sim(g, beacons=[0])


class TestCompactScheme:
    def test_path_storage(self):
        s = compact_scheme_build(path_graph(10), 0)
        mem = memory_account(s)
        # beacon: 9 entries of (4-bit id + 1-bit port); others one port
        assert mem.per_node_bits[0] == 9 * (4 + 1)
        assert all(b == 1 for b in mem.per_node_bits[1:])
        assert mem.total_bits == 45 + 9

    def test_star_center_beacon(self):
        s = compact_scheme_build(star_graph(10), 0)
        assert all(int(s.parent[v]) == 0 for v in range(1, 10))
        assert all(int(s.port_to_parent[v]) == 1 for v in range(1, 10))
        mem = memory_account(s)
        assert mem.per_node_bits[0] == 9 * (4 + 4)

    def test_disconnected_rejected(self):
        with pytest.raises(ValueError):
            compact_scheme_build(two_triangles(), 0)

    def test_directed_rejected(self):
        g = build_graph(3, [(0, 1), (1, 2)], directed=True)
        with pytest.raises(ValueError):
            compact_scheme_build(g, 0)

    def test_ports_are_valid(self):
        g = connected_random_graph(200, 380, seed=2)
        s = compact_scheme_build(g, 9)
        for u in range(g.n):
            if u == 9:
                continue
            port = int(s.port_to_parent[u])
            assert 1 <= port <= g.out_degree(u)
            assert int(g.out_neighbors(u)[port - 1]) == int(s.parent[u])


class TestCompactRouteSim:
    def test_from_beacon(self):
        s = compact_scheme_build(path_graph(10), 0)
        tr = compact_route_sim(s, 0, 6)
        assert tr.delivered
        assert tr.hops == 6
        assert tr.steps[0].header.startswith("P:")  # phase 1 immediately

    def test_path_closed_form(self):
        s = compact_scheme_build(path_graph(10), 0)
        tr = compact_route_sim(s, 3, 7)
        assert tr.delivered
        assert tr.hops == 3 + 7
        phases = [step.header.rsplit(":", 1)[1] for step in tr.steps]
        flips = sum(a != b for a, b in zip(phases, phases[1:]))
        assert flips == 1
        assert tr.steps[3].node == 0  # the flip happens at the beacon

    def test_same_node_trivial(self):
        s = compact_scheme_build(path_graph(10), 0)
        tr = compact_route_sim(s, 4, 4)
        assert tr.delivered and tr.hops == 0 and tr.steps == []

    def test_headers_shrink_one_port_per_hop(self):
        g = connected_random_graph(100, 220, seed=5)
        s = compact_scheme_build(g, 0)
        tr = compact_route_sim(s, 42, 87)
        remaining = [int(st.header.split(":")[1]) for st in tr.steps
                     if st.header.startswith("P:")]
        assert remaining == list(range(remaining[0], -1, -1))

    def test_first_header_is_destination_phase_zero(self):
        g = connected_random_graph(50, 120, seed=6)
        s = compact_scheme_build(g, 13)
        tr = compact_route_sim(s, 20, 31)
        assert tr.steps[0].header == "D:31:0"
        assert tr.steps[0].in_port == 0

    def test_delivery_and_hops_match_tables(self):
        g = connected_random_graph(400, 900, seed=8)
        beacon = 123
        s = compact_scheme_build(g, beacon)
        dist = bfs_distances(g, beacon).dist
        rng = np.random.default_rng(3)
        for _ in range(300):
            u, v = (int(x) for x in rng.integers(0, g.n, 2))
            tr = compact_route_sim(s, u, v)
            assert tr.delivered
            expect = 0 if u == v else int(dist[u] + dist[v])
            assert tr.hops == expect

    def test_dump_format(self):
        s = compact_scheme_build(path_graph(5), 0)
        text = compact_route_sim(s, 2, 3).dump()
        for line in text.splitlines():
            node, in_port, header, out_port = line.split()
            int(node), int(in_port), int(out_port)
            kind, payload, phase = header.split(":")
            assert kind in ("D", "P") and phase in ("0", "1")

    def test_hops_equal_beacon_route_length(self):
        # The table walk and the message-level simulation realize the same
        # scheme: identical hop counts for every sampled pair.
        g = connected_random_graph(250, 500, seed=4)
        beacon = 31
        s = compact_scheme_build(g, beacon)
        t = build_beacon_tables(g, beacon)
        rng = np.random.default_rng(8)
        for _ in range(200):
            u, v = (int(x) for x in rng.integers(0, g.n, 2))
            if u == v:
                continue
            assert compact_route_sim(s, u, v).hops == beacon_route(t, u, v).length


class TestMemoryAccount:
    def test_total_is_sum(self):
        g = connected_random_graph(300, 700, seed=1)
        s = compact_scheme_build(g, 0)
        mem = memory_account(s)
        assert mem.total_bits == int(mem.per_node_bits.sum())
        assert mem.implied_constant == pytest.approx(
            mem.total_bits / (g.n * math.log2(g.n)))

    def test_ws_memory_bound(self):
        g = gen_watts_strogatz(10_000, 5, 0.2, seed=3)
        mem = memory_account(compact_scheme_build(g, 17))
        assert mem.total_bits <= 4 * g.n * math.log2(g.n)

    def test_doubling_keeps_constant_stable(self):
        consts = []
        for n in (10_000, 20_000):
            g = gen_watts_strogatz(n, 5, 0.2, seed=3)
            consts.append(memory_account(compact_scheme_build(g, 17))
                          .implied_constant)
        assert abs(consts[1] - consts[0]) / consts[0] <= 0.25

    def test_constant_bounded_across_model_suite(self):
        from idemnet.generators import gen_barabasi_albert
        graphs = [
            gen_watts_strogatz(2_000, 3, 0.2, seed=1),
            gen_barabasi_albert(2_000, 3, seed=2),
            gen_random_regular(2_000, 4, seed=3),
            connected_random_graph(2_000, 5_000, seed=4),
        ]
        for g in graphs:
            mem = memory_account(compact_scheme_build(g, 0))
            assert mem.implied_constant <= 4
