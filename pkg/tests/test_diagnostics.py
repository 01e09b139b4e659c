import math

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings

from spr.diagnostics import (
    caterpillar_max_distortion,
    caterpillar_voronoi_distortion,
    empirical_tail,
    expected_distortion,
    interval_partition,
)
from spr.errors import InvalidParameter, UnknownAlgorithm
from spr.graph_core import build_graph, shortest_path
from spr.instances import gen_caterpillar
from spr.partition import distortion
from spr.runner import run_algorithm
from tests.strategies import connected_graphs

PROPERTY_SETTINGS = settings(max_examples=50, deadline=None, suppress_health_check=[HealthCheck.too_slow])


def fine_path(steps=39, weight=0.1):
    """Terminals 0 and 1 joined by ``steps`` Steiner vertices (ids 2..)."""
    chain = [0] + list(range(2, steps + 2)) + [1]
    return build_graph([(a, b, weight) for a, b in zip(chain, chain[1:])], [0, 1])


def check_intervals(partition, g):
    path = partition.path
    covered = []
    for q in partition.intervals:
        covered.extend(range(q.start, q.end + 1))
        if g.is_terminal(path[q.start]):
            assert q.start == q.end and q.L == 0.0 and q.D == 0.0
        assert partition.satisfies_bounds(q)
    assert covered == list(range(len(path)))


class TestIntervalPartition:
    def test_fine_path(self):
        g = fine_path()
        partition = interval_partition(g, 0, 1, c_int=1.0, delta=1.0)
        check_intervals(partition, g)
        assert partition.path == (0, *range(2, 41), 1)
        assert len(partition.intervals) > 2
        assert any(q.end > q.start for q in partition.intervals)

    def test_external_length_between_one_and_two_path_lengths(self):
        g = fine_path()
        partition = interval_partition(g, 0, 1, c_int=1.0, delta=1.0)
        total = partition.total_external_length()
        assert 4.0 - 1e-9 <= total <= 8.0 + 1e-9

    def test_steiner_external_length_skips_endpoint_singletons(self):
        g = fine_path()
        partition = interval_partition(g, 0, 1, c_int=1.0, delta=1.0)
        steiner = partition.steiner_external_length()
        assert 4.0 - 1e-9 <= steiner <= 8.0 + 1e-9
        assert partition.total_external_length() == pytest.approx(steiner + 0.2)

    def test_adjacent_terminals_have_no_steiner_length(self):
        g = build_graph([(0, 1, 2.0)], [0, 1])
        assert interval_partition(g, 0, 1).steiner_external_length() == 0.0

    @pytest.mark.parametrize("c_int, delta", [(1.0, 3.0), (0.5, 2.5)])
    def test_rejects_unreachable_targets(self, c_int, delta):
        g = build_graph([(0, 2, 1.0), (2, 1, 1.0)], [0, 1])
        with pytest.raises(InvalidParameter):
            interval_partition(g, 0, 1, c_int=c_int, delta=delta)

    def test_product_of_one_is_accepted(self):
        g = build_graph([(0, 2, 1.0), (2, 1, 1.0)], [0, 1])
        partition = interval_partition(g, 0, 1, c_int=0.5, delta=2.0)
        assert all(partition.satisfies_bounds(q) for q in partition.intervals)

    def test_caterpillar_intervals_are_single_vertices(self, caterpillar10):
        partition = interval_partition(caterpillar10, 0, 9)
        assert [(q.start, q.end) for q in partition.intervals] == [(i, i) for i in range(12)]
        assert all(partition.satisfies_bounds(q) for q in partition.intervals)
        assert any("exceed" in w for w in partition.warnings)

    def test_interior_terminal(self):
        g = build_graph([(0, 2, 1.0), (2, 1, 1.0), (1, 3, 1.0)], [0, 1, 3])
        partition = interval_partition(g, 0, 3)
        assert partition.path == (0, 2, 1, 3)
        assert [(q.start, q.end) for q in partition.intervals] == [(0, 0), (1, 1), (2, 2), (3, 3)]
        assert any(w.startswith("IntermediateTerminalOnPath") for w in partition.warnings)

    def test_adjacent_terminals(self):
        g = build_graph([(0, 1, 2.0)], [0, 1])
        partition = interval_partition(g, 0, 1)
        assert [q.L_plus for q in partition.intervals] == [2.0, 2.0]

    @pytest.mark.parametrize("t, t_prime", [(0, 2), (0, 0)])
    def test_endpoint_checks(self, t, t_prime):
        g = fine_path(3)
        with pytest.raises(InvalidParameter):
            interval_partition(g, t, t_prime)

    def test_rows(self):
        partition = interval_partition(fine_path(), 0, 1, c_int=1.0, delta=1.0)
        row = partition.intervals[1].to_row()
        assert row.start == 1 and row.D == pytest.approx(0.1)

    @PROPERTY_SETTINGS
    @given(g=connected_graphs())
    def test_intervals_cover_the_path(self, g):
        partition = interval_partition(g, g.terminals[0], g.terminals[1], c_int=1.0, delta=1.0)
        assert list(partition.path) == shortest_path(g, g.terminals[0], g.terminals[1])
        check_intervals(partition, g)
        prefix_total = sum(g.weight(a, b) for a, b in zip(partition.path, partition.path[1:]))
        assert prefix_total * (1 - 1e-9) <= partition.total_external_length() <= 2 * prefix_total * (1 + 1e-9)


class TestExpectedDistortion:
    @pytest.mark.parametrize("algorithm", ["noisy", "fast", "ball"])
    def test_two_terminals(self, gadget, algorithm):
        estimate = expected_distortion(gadget, algorithm, trials=5, seed=1, threads=2)
        assert estimate.max_mean == 1.0
        assert np.all(estimate.stderr == 0.0)
        assert estimate.worst.tolist() == [1.0] * 5

    def test_deterministic_algorithm_has_no_spread(self, small_random):
        estimate = expected_distortion(small_random, "voronoi", trials=4)
        assert np.all(estimate.stderr == 0.0)
        report = distortion(small_random, run_algorithm(small_random, "voronoi").minor)
        np.testing.assert_allclose(estimate.mean, report.per_pair, rtol=1e-12)
        assert estimate.argmax_pair == report.argmax_pair

    def test_single_trial(self, small_random):
        estimate = expected_distortion(small_random, "fast", trials=1, seed=7)
        report = distortion(small_random, run_algorithm(small_random, "fast", 7).minor)
        np.testing.assert_array_equal(estimate.mean, report.per_pair)
        assert estimate.max_mean_stderr == 0.0
        assert estimate.mean_worst == report.worst

    def test_thread_count_does_not_change_the_estimate(self, small_random):
        one = expected_distortion(small_random, "noisy", trials=6, seed=3, threads=1)
        many = expected_distortion(small_random, "noisy", trials=6, seed=3, threads=4)
        np.testing.assert_array_equal(one.mean, many.mean)
        np.testing.assert_array_equal(one.stderr, many.stderr)
        np.testing.assert_array_equal(one.worst, many.worst)

    def test_summary_and_rows(self, small_random):
        estimate = expected_distortion(small_random, "fast", trials=3)
        k = small_random.k
        rows = estimate.pair_rows()
        assert len(rows) == k * (k - 1) // 2
        assert all(row.min <= row.mean <= row.max for row in rows)
        summary = estimate.summary()
        assert summary.max_mean == max(row.mean for row in rows)
        assert summary.trials == 3

    def test_bad_arguments(self, small_random):
        with pytest.raises(InvalidParameter):
            expected_distortion(small_random, "fast", trials=0)
        with pytest.raises(UnknownAlgorithm):
            expected_distortion(small_random, "greedy", trials=2)


class TestCaterpillar:
    def test_voronoi_reaches_the_maximum(self):
        g = gen_caterpillar(12, 0.2)
        report = distortion(g, run_algorithm(g, "voronoi").minor)
        assert report.worst == pytest.approx(caterpillar_max_distortion(12, 0.2), rel=1e-9)

    def test_closed_form(self):
        assert caterpillar_voronoi_distortion(2, 0.5) == 1.0
        assert caterpillar_voronoi_distortion(3, 1.0) == pytest.approx(6.0 / 4.0)


def test_empirical_tail():
    hits, se = empirical_tail(np.array([1.0, 2.0, 3.0, 4.0]), 3.0)
    assert hits == 0.5
    assert se == pytest.approx(math.sqrt(0.25 / 4))
