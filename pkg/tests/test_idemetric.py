import math

import numpy as np
import pytest

from idemnet.generators import (ModelSpec, gen_barabasi_albert,
                                gen_random_regular, gen_watts_strogatz)
from idemnet.graph import build_graph, bfs_distances
from idemnet.idemetric import (DistanceHistogram, concentration_report,
                               default_num_pairs, fed_check, idemetric_scan,
                               poisson_law, pump_check, r_u,
                               sample_pair_distances, us_proxy, ws_degree_law,
                               VERDICT_SI, VERDICT_INCONSISTENT)

from conftest import (ball_sets, complete_graph, cycle_graph,
                      disjoint_cliques, edge_cut_size, floyd_warshall,
                      path_graph, random_graph, star_graph, two_triangles)


def exhaustive_histogram(g, scope="all"):
    """All-pairs histogram from the Floyd-Warshall oracle (tests only)."""
    fw = floyd_warshall(g)
    counts = {}
    unreachable = 0
    pairs = 0
    for u in range(g.n):
        for v in range(g.n):
            if u == v or (not g.directed and u > v):
                continue
            pairs += 1
            d = fw[u][v]
            if d == float("inf"):
                unreachable += 1
            else:
                counts[int(d)] = counts.get(int(d), 0) + 1
    return DistanceHistogram(counts=counts, sampled_pairs=pairs,
                             unreachable=unreachable, scope=scope)


class TestSamplePairDistances:
    def test_complete_graph_all_ones(self):
        h = sample_pair_distances(complete_graph(50), 500, seed=0)
        assert h.counts == {1: 500}
        assert h.unreachable == 0

    def test_path_graph_support(self):
        h = sample_pair_distances(path_graph(10), 2_000, seed=1)
        assert set(h.counts) <= set(range(1, 10))
        assert h.finite_total == 2_000

    def test_exhaustive_path_histogram_closed_form(self):
        h = exhaustive_histogram(path_graph(10))
        assert h.counts == {d: 10 - d for d in range(1, 10)}
        assert h.sampled_pairs == 45

    def test_matches_per_source_bfs_oracle(self):
        # The production path answers each pair bidirectionally; a full
        # forward sweep per distinct source must give identical distances.
        g = random_graph(400, 900, seed=3)
        h = sample_pair_distances(g, 3_000, seed=7)
        from idemnet.rng import make_rng, STREAM_PAIRS
        rng = make_rng(7, STREAM_PAIRS)
        pool = np.arange(g.n, dtype=np.int32)
        us = pool[rng.integers(0, g.n, 3_000)]
        vs = pool[rng.integers(0, g.n, 3_000)]
        while True:
            clash = us == vs
            if not clash.any():
                break
            vs[clash] = pool[rng.integers(0, g.n, int(clash.sum()))]
        counts = {}
        unreachable = 0
        cache = {}
        for u, v in zip(us.tolist(), vs.tolist()):
            if u not in cache:
                cache[u] = bfs_distances(g, u).dist
            d = int(cache[u][v])
            if d < 0:
                unreachable += 1
            else:
                counts[d] = counts.get(d, 0) + 1
        assert h.counts == counts
        assert h.unreachable == unreachable

    def test_giant_scope_never_unreachable(self):
        g = disjoint_cliques(60)
        h = sample_pair_distances(g, 1_000, seed=2, scope="giant")
        assert h.unreachable == 0
        assert h.counts == {1: 1_000}

    def test_directed_forward_distances(self):
        g = build_graph(3, [(0, 1), (1, 2), (2, 0)], directed=True)
        h = sample_pair_distances(g, 600, seed=4)
        assert set(h.counts) == {1, 2}

    def test_default_budget(self):
        assert default_num_pairs(100) == 10_000
        assert default_num_pairs(10**6) == 20_000


class TestConcentrationReport:
    def test_point_mass(self):
        h = DistanceHistogram(counts={5: 100}, sampled_pairs=100,
                              unreachable=0, scope="all")
        rep = concentration_report(h, eps_list=(0.01, 0.5), b_list=(0, 1))
        assert rep.median_distance == 5
        assert rep.relative_mass[0.01] == 1.0
        assert rep.window_mass[0] == 1.0
        assert rep.best_window_center[0] == 5

    def test_path_exhaustive_window(self):
        # Triangular histogram {1:9, ..., 9:1}: brute-force maximization
        # puts the best width-1 window at [1, 3] (center 2, mass 24/45).
        h = exhaustive_histogram(path_graph(10))
        rep = concentration_report(h, b_list=(1,))
        counts = h.counts
        best = max(
            (sum(counts.get(d, 0) for d in range(c - 1, c + 2)), -c)
            for c in range(1, 10))
        assert rep.window_mass[1] == best[0] / 45 == 24 / 45
        assert rep.best_window_center[1] == -best[1] == 2

    def test_window_tie_break_smallest_center(self):
        h = DistanceHistogram(counts={2: 5, 4: 5}, sampled_pairs=10,
                              unreachable=0, scope="all")
        rep = concentration_report(h, b_list=(0,))
        assert rep.best_window_center[0] == 2

    def test_unreachable_kept_separate(self):
        h = DistanceHistogram(counts={3: 80}, sampled_pairs=100,
                              unreachable=20, scope="all")
        rep = concentration_report(h)
        assert rep.relative_mass[0.05] == 1.0  # fractions over finite mass
        assert rep.unreachable == 20

    def test_all_unreachable_rejected(self):
        h = DistanceHistogram(counts={}, sampled_pairs=10, unreachable=10,
                              scope="all")
        with pytest.raises(ValueError):
            concentration_report(h)

    def test_masses_monotone_in_width(self):
        for seed in range(5):
            g = random_graph(120, 350, seed=seed)
            h = sample_pair_distances(g, 2_000, seed=seed)
            rep = concentration_report(h, eps_list=(0.05, 0.1, 0.2, 0.4),
                                       b_list=(0, 1, 2, 3, 5))
            rel = [rep.relative_mass[e] for e in (0.05, 0.1, 0.2, 0.4)]
            win = [rep.window_mass[b] for b in (0, 1, 2, 3, 5)]
            assert rel == sorted(rel)
            assert win == sorted(win)

    def test_wide_window_captures_everything(self):
        h = exhaustive_histogram(path_graph(10))
        rep = concentration_report(h, b_list=(9,))
        assert rep.window_mass[9] == 1.0


class TestIdemetricScan:
    def test_ws_small_world_is_si_consistent(self):
        spec = ModelSpec("watts_strogatz", 1024, 0,
                         {"m": 10, "p_rewire": 0.2})
        scan = idemetric_scan(spec, [1024, 4096, 16384], seed=0,
                              num_pairs=4_000)
        assert scan.verdict == VERDICT_SI
        assert 2 in scan.window_trend_b

    def test_disjoint_cliques_not_consistent(self):
        scan = idemetric_scan(lambda n, s: disjoint_cliques(n),
                              [64, 128, 256], seed=1, num_pairs=2_000)
        assert scan.verdict == VERDICT_INCONSISTENT
        assert not scan.finite_ok

    def test_ring_lattice_not_consistent(self):
        # Distances spread linearly with n: no fixed window keeps mass.
        scan = idemetric_scan(lambda n, s: gen_watts_strogatz(n, 2, 0.0, s),
                              [128, 256, 512], seed=0, num_pairs=3_000)
        assert scan.verdict == VERDICT_INCONSISTENT
        assert scan.window_trend_b == []

    def test_requires_increasing_sizes(self):
        spec = ModelSpec("erdos_renyi", 100, 0, {"mean_degree": 5})
        with pytest.raises(ValueError):
            idemetric_scan(spec, [100, 100, 200], seed=0)
        with pytest.raises(ValueError):
            idemetric_scan(spec, [100, 200], seed=0)

    def test_kleinberg_scan_reports_scale(self):
        spec = ModelSpec("kleinberg", 256, 0,
                         {"r": 0.0, "p_local": 1, "q_long": 1})
        scan = idemetric_scan(spec, [256, 1024, 4096], seed=0,
                              num_pairs=2_000)
        assert scan.predicted_scale is not None
        assert abs(scan.predicted_scale["alpha"] - 3.38298) < 1e-4
        assert "4096" in scan.predicted_scale["ell"]


class TestPumpCheck:
    def test_cycle_fails(self):
        g = cycle_graph(10_000)
        rep = pump_check(g, eps=0.1, num_centers=20, alpha_threshold=0.05,
                         seed=1)
        assert rep.pass_fraction == 0.0
        assert rep.ratio_floor <= 2 / (0.1 * 10_000)

    def test_complete_graph_vacuous_window(self):
        rep = pump_check(complete_graph(100), eps=0.1, num_centers=10,
                         alpha_threshold=0.05, seed=1)
        assert rep.pass_fraction == 1.0
        assert rep.ratio_floor == math.inf

    def test_regular_expander_passes(self):
        g = gen_random_regular(10_000, 3, seed=5)
        rep = pump_check(g, eps=0.1, num_centers=50, alpha_threshold=0.05,
                         seed=2)
        assert rep.pass_fraction >= 0.95
        assert rep.ratio_floor >= 0.05

    def test_no_big_ball_counted(self):
        # K_30 plus K_10: balls from the small clique stop at 10 < eps * n.
        edges = [(i, j) for i in range(30) for j in range(i + 1, 30)]
        edges += [(30 + i, 30 + j) for i in range(10) for j in range(i + 1, 10)]
        g = build_graph(40, edges)
        rep = pump_check(g, eps=0.3, num_centers=40, alpha_threshold=0.01,
                         seed=3)
        assert 0 < rep.fail_no_big_ball < 40
        assert rep.pass_fraction == 1 - rep.fail_no_big_ball / 40

    def test_rejects_directed(self):
        g = build_graph(3, [(0, 1)], directed=True)
        with pytest.raises(ValueError):
            pump_check(g, 0.1, 5, 0.05, seed=0)

    @pytest.mark.parametrize("seed", range(4))
    def test_matches_brute_force_oracle(self, seed):
        # Explicit ball sets and set-based edge-cut counting, every center,
        # against the library's clause evaluation.
        from idemnet.idemetric import pump_center_check
        n = 60 + 35 * seed
        g = random_graph(n, 3 * n, seed=seed)
        for eps in (0.1, 0.2, 0.35):
            lo, hi = eps * g.n, (1 - eps) * g.n
            for u in range(g.n):
                balls = ball_sets(g, u)
                want_i = any(len(b) >= lo for b in balls)
                want_ii = True
                min_ratio = math.inf
                for ball in balls:
                    if lo <= len(ball) <= hi:
                        cut = edge_cut_size(g, ball)
                        min_ratio = min(min_ratio, cut / len(ball))
                        if cut < 0.05 * len(ball):
                            want_ii = False
                got_i, got_ii, got_ratio = pump_center_check(g, u, eps, 0.05)
                assert got_i == want_i
                assert got_ii == want_ii
                assert got_ratio == pytest.approx(min_ratio)


class TestRu:
    def test_tiny_eps_radius_zero(self):
        g = cycle_graph(100)
        assert r_u(g, 0, 1 / 100).r_u == 0

    def test_cycle_quarter(self):
        assert r_u(cycle_graph(100), 0, 0.25).r_u == 12

    def test_undefined_on_small_component(self):
        assert r_u(two_triangles(), 0, 0.9).r_u is None

    def test_monotone_in_eps_and_consistent_with_profile(self):
        from idemnet.graph import ball_profile
        g = random_graph(150, 400, seed=6)
        prof = ball_profile(g, 3)
        prev = 0
        for eps in (0.05, 0.1, 0.3, 0.6, 0.9):
            val = r_u(g, 3, eps).r_u
            if val is None:
                assert prof.sizes[-1] < eps * g.n
                continue
            assert val >= prev
            assert prof.sizes[val] >= eps * g.n
            assert val == 0 or prof.sizes[val - 1] < eps * g.n
            prev = val


class TestUsProxy:
    def test_regular_graph(self):
        g = gen_random_regular(1_000, 4, seed=1)
        rep = us_proxy(g, 0.1)
        assert rep.top_degree_mass == pytest.approx(0.1)

    def test_star_half_mass(self):
        g = star_graph(100)
        assert us_proxy(g, 1 / 100).top_degree_mass == 0.5

    @pytest.mark.slow
    def test_scale_free_top_mass_bounded(self):
        g = gen_barabasi_albert(100_000, 3, seed=9)
        assert us_proxy(g, 0.01).top_degree_mass < 0.25

    def test_monotone_and_one_at_full(self):
        g = random_graph(200, 500, seed=2)
        vals = [us_proxy(g, mu).top_degree_mass
                for mu in (0.01, 0.05, 0.2, 0.5, 1.0)]
        assert vals == sorted(vals)
        assert vals[-1] == 1.0

    def test_edgeless_rejected(self):
        with pytest.raises(ValueError):
            us_proxy(build_graph(5, []), 0.5)


class TestFedCheck:
    def test_regular_family_is_stable(self):
        rep = fed_check(lambda n, s: gen_random_regular(n, 4, s),
                        [1_000, 2_000], seed=1)
        assert rep.tv_successive == [0.0]
        assert rep.mean_gap == [0.0]

    def test_ws_matches_analytic_law(self):
        spec = ModelSpec("watts_strogatz", 10_000, 0,
                         {"m": 5, "p_rewire": 0.2})
        rep = fed_check(spec, [10_000, 20_000], seed=3)
        assert all(tv < 0.02 for tv in rep.tv_to_analytic)

    def test_er_tv_to_poisson_decreasing(self):
        spec = ModelSpec("erdos_renyi", 2_500, 0, {"mean_degree": 5})
        rep = fed_check(spec, [2_500, 10_000, 40_000], seed=3)
        tv = rep.tv_to_analytic
        assert tv[0] > tv[1] > tv[2]

    def test_ws_law_normalizes(self):
        law = ws_degree_law(5, 0.2, 60)
        assert abs(law.sum() - 1) < 1e-9
        mean = (np.arange(len(law)) * law).sum()
        assert abs(mean - 10) < 1e-6  # expected degree 2m

    def test_poisson_law_normalizes(self):
        law = poisson_law(5, 80)
        assert abs(law.sum() - 1) < 1e-9

    def test_needs_two_sizes(self):
        spec = ModelSpec("erdos_renyi", 100, 0, {"mean_degree": 5})
        with pytest.raises(ValueError):
            fed_check(spec, [100], seed=0)
