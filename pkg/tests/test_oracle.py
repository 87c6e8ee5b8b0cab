import numpy as np
import pytest

from infmax.diffusion import SimulationParams, estimate_spread
from infmax.errors import EnumerationCapError
from infmax.graphs import build_graph
from infmax.oracle import exact_spread, exact_spread_all_subsets

from conftest import path_graph, random_instance
from reference import edges_of, plain_ic_exact_spread


class TestExactSpreadExamples:
    def test_single_node(self):
        g = build_graph(1, [], [], [])
        assert exact_spread(g, {0}, 5) == pytest.approx(1.0)

    def test_single_edge_is_one_plus_p(self):
        for p in (0.1, 0.5, 1.0):
            g = path_graph([p])
            assert exact_spread(g, {0}, 1) == pytest.approx(1.0 + p)
            assert exact_spread(g, {0}, 7) == pytest.approx(1.0 + p)

    def test_path_cut_by_deadline(self):
        g = path_graph([0.5, 0.5])
        assert exact_spread(g, {0}, 1) == pytest.approx(1.5)
        assert exact_spread(g, {0}, 2) == pytest.approx(1.75)

    def test_deadline_zero_counts_seeds_only(self):
        rng = np.random.default_rng(1)
        for _ in range(5):
            g = random_instance(rng)
            assert exact_spread(g, {0, 1}, 0) == pytest.approx(2.0)

    def test_cap_errors(self):
        rng = np.random.default_rng(2)
        g = random_instance(rng, max_nodes=6, max_edges=10)
        with pytest.raises(EnumerationCapError):
            exact_spread(g, {0}, 3, branch_cap=1)
        # m > 25 is rejected outright
        src = [0] * 26
        dst = list(range(1, 27))
        big = build_graph(27, src, dst, [0.5] * 26)
        with pytest.raises(EnumerationCapError):
            exact_spread(big, {0}, 3)


class TestAllSubsetsTable:
    def test_matches_single_set_oracle(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            g = random_instance(rng, max_nodes=5, max_edges=8, max_offset=2)
            for t in (0, 1, 3):
                table = exact_spread_all_subsets(g, t)
                assert table[0] == 0.0
                for mask in range(1, 1 << g.n):
                    seeds = [v for v in range(g.n) if (mask >> v) & 1]
                    assert table[mask] == pytest.approx(
                        exact_spread(g, seeds, t), abs=1e-9)

    def test_full_mask_is_n(self):
        rng = np.random.default_rng(4)
        g = random_instance(rng, max_nodes=5, max_edges=6)
        table = exact_spread_all_subsets(g, 2)
        assert table[(1 << g.n) - 1] == pytest.approx(g.n)


class TestStructuralProperties:
    """Quick property sample; the full suite runs in the acceptance tests."""

    def test_monotone_submodular_deadline(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            g = random_instance(rng, max_nodes=5, max_edges=8, max_offset=2)
            tables = {t: exact_spread_all_subsets(g, t) for t in (0, 1, 2, 5)}
            full = 1 << g.n
            for t, table in tables.items():
                for mask in range(full):
                    for v in range(g.n):
                        if (mask >> v) & 1:
                            continue
                        gain = table[mask | (1 << v)] - table[mask]
                        assert gain >= -1e-9  # monotone
                # deadline 0 is exactly the seed count
                if t == 0:
                    for mask in range(full):
                        assert table[mask] == pytest.approx(
                            bin(mask).count("1"), abs=1e-9)
            # nondecreasing in the deadline
            for mask in range(full):
                vals = [tables[t][mask] for t in (0, 1, 2, 5)]
                assert all(b >= a - 1e-9 for a, b in zip(vals, vals[1:]))
            # submodularity over nested pairs
            table = tables[2]
            for s2 in range(full):
                s1 = s2
                while True:  # enumerate submasks of s2
                    for v in range(g.n):
                        if (s2 >> v) & 1:
                            continue
                        bit = 1 << v
                        gain1 = table[s1 | bit] - table[s1]
                        gain2 = table[s2 | bit] - table[s2]
                        assert gain1 >= gain2 - 1e-9
                    if s1 == 0:
                        break
                    s1 = (s1 - 1) & s2


class TestOracleAgainstEstimator:
    def test_estimator_consistency_sample(self):
        rng = np.random.default_rng(6)
        for t in (1, 2, 5):
            g = random_instance(rng, max_nodes=6, max_edges=9)
            exact = exact_spread(g, {0}, t)
            est = estimate_spread(g, {0}, SimulationParams(t, 50_000, 11))
            tol = max(0.02, 4.0 * est.sample_stddev / np.sqrt(est.trials))
            assert abs(est.mean - exact) <= tol

    def test_threshold_semantics_agree(self):
        # blocked and unblocked offsets must mean the same thing to the
        # enumerator and the simulator
        g = build_graph(2, [0], [1], [0.5], delay_rows=[(0.5, 0.5)])
        g.threshold[1] = 0.3
        # mass per offset is 0.25 < 0.3: both offsets blocked
        assert exact_spread(g, {0}, 5) == pytest.approx(1.0)
        est = estimate_spread(g, {0}, SimulationParams(5, 5000, 2))
        assert est.mean == 1.0
        g.threshold[1] = 0.2  # now both offsets pass
        assert exact_spread(g, {0}, 5) == pytest.approx(1.5)

    def test_classical_ic_reduction_spot(self):
        rng = np.random.default_rng(7)
        g = random_instance(rng, max_nodes=6, max_edges=9, max_offset=1)
        ref = plain_ic_exact_spread(g.n, edges_of(g), [0])
        ours = exact_spread(g, {0}, g.n)
        assert ours == pytest.approx(ref, abs=1e-9)
