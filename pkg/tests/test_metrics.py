"""Graph statistics against hand-computed values on tiny graphs, the
brute-force oracle, and the log-binning helper."""

import math

import numpy as np
import pytest

from panet.graphgen import Multigraph, generate, seed_graph
from panet.metrics import (
    brute_force_profile,
    clustering,
    degree_profile,
    dnn_empirical,
    log_binned_curve,
    pearson_assortativity,
    sum_squares,
)
from panet.params import derive_generator_params


def _graph(n, edges):
    g = Multigraph()
    for _ in range(n):
        g.add_vertex()
    for u, v in edges:
        g.add_edge(u, v)
    return g


@pytest.fixture
def path3():
    return _graph(3, [(0, 1), (1, 2)])


@pytest.fixture
def star4():
    return _graph(4, [(0, 1), (0, 2), (0, 3)])


class TestDegreeProfile:
    def test_path_hand_values(self, path3):
        p = degree_profile(path3)
        # Degrees 1, 2, 1.  Each leaf's neighbor has degree 2; the center's
        # two neighbors have degree 1 each.
        assert p.N == {1: 2, 2: 1}
        assert p.S == {1: 4, 2: 2}
        assert p.W == 6
        assert dnn_empirical(p, 1) == pytest.approx(2.0)
        assert dnn_empirical(p, 2) == pytest.approx(1.0)

    def test_doubled_clique_hand_values(self):
        p = degree_profile(seed_graph(2))
        # 3 vertices of degree 4; each has 4 neighbor slots of degree 4.
        assert p.N == {4: 3}
        assert p.S == {4: 48}
        assert p.W == 48
        assert dnn_empirical(p, 4) == pytest.approx(4.0)

    def test_invariants_on_generated_graph(self):
        gp = derive_generator_params(2, 0.25, 0.3)
        g = generate(gp, 2000, seed=4)
        p = degree_profile(g)
        assert sum(p.N.values()) == p.n == 2000
        assert sum(d * c for d, c in p.N.items()) == 2 * p.num_edges
        assert sum(p.S.values()) == p.W == sum_squares(g)

    def test_missing_degree_is_nan(self, path3):
        assert math.isnan(dnn_empirical(degree_profile(path3), 7))


class TestBruteForceOracle:
    def test_equals_streaming_on_generated_graphs(self):
        gp = derive_generator_params(2, 0.2, 0.3)
        for seed in range(20):
            g = generate(gp, 500, seed=seed)
            fast = degree_profile(g)
            slow = brute_force_profile(g)
            assert fast.N == slow.N
            assert fast.S == slow.S
            assert fast.W == slow.W

    def test_size_cap(self):
        gp = derive_generator_params(2, 0.2, 0.3)
        with pytest.raises(ValueError, match="capped"):
            brute_force_profile(generate(gp, 10_001, seed=0))


class TestClustering:
    def test_triangle(self):
        cp = clustering(_graph(3, [(0, 1), (0, 2), (1, 2)]))
        assert cp.C1 == pytest.approx(1.0)
        assert cp.C2 == pytest.approx(1.0)
        assert cp.C_by_degree == {2: pytest.approx(1.0)}

    def test_path_has_no_triangles(self, path3):
        cp = clustering(path3)
        assert cp.C1 == 0.0
        assert cp.C2 == 0.0

    def test_parallel_edges_collapse(self):
        # Doubled triangle: the simple projection is K3, clustering 1;
        # C_by_degree is keyed by the multigraph degree 4.
        cp = clustering(seed_graph(2))
        assert cp.C1 == pytest.approx(1.0)
        assert cp.C_by_degree == {4: pytest.approx(1.0)}

    def test_paw_graph(self):
        # Triangle {0,1,2} plus pendant 3 on vertex 0.
        g = _graph(4, [(0, 1), (0, 2), (1, 2), (0, 3)])
        cp = clustering(g)
        # 1 triangle; paths-of-2: deg 3,2,2,1 -> 3+1+1+0 = 5.
        assert cp.C1 == pytest.approx(3 / 5)
        assert cp.C2 == pytest.approx((1 / 3 + 1 + 1 + 0) / 4)
        assert cp.C_by_degree[3] == pytest.approx(1 / 3)
        assert cp.C_by_degree[1] == 0.0


class TestAssortativity:
    def test_star_is_minus_one(self, star4):
        assert pearson_assortativity(star4) == pytest.approx(-1.0)

    def test_regular_graph_is_nan(self):
        assert math.isnan(pearson_assortativity(seed_graph(2)))

    def test_generated_subcritical_sign(self):
        # Disassortative regime: high-degree vertices attach mostly to the
        # many low-degree ones.
        gp = derive_generator_params(2, 0.25, 0.3)
        r = pearson_assortativity(generate(gp, 20_000, seed=5))
        assert -1.0 < r < 0.1


class TestLogBinning:
    def test_synthetic_power_law_slope(self):
        points = {d: d**-2.0 for d in range(1, 1001)}
        curve = log_binned_curve(points, bins_per_decade=4)
        xs = np.log([c for c, _, _ in curve])
        ys = np.log([v for _, v, _ in curve])
        slope = np.polyfit(xs, ys, 1)[0]
        assert slope == pytest.approx(-2.0, abs=0.05)

    def test_weighting_and_nan_skip(self):
        points = {1: 10.0, 2: float("nan"), 3: 20.0}
        curve = log_binned_curve(points, bins_per_decade=1, weights={1: 1.0, 3: 3.0})
        assert len(curve) == 1
        _, value, count = curve[0]
        assert value == pytest.approx((10 + 60) / 4)
        assert count == 2

    def test_invalid_inputs(self):
        with pytest.raises(ValueError, match="bins_per_decade"):
            log_binned_curve({1: 1.0}, bins_per_decade=0)
        with pytest.raises(ValueError, match="positive"):
            log_binned_curve({0: 1.0}, bins_per_decade=2)
