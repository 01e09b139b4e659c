import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from spr.graph_core import build_graph, min_terminal_pair_distance, subdivide_edges, terminal_distances, terminal_row
from spr.instances import gen_caterpillar
from spr.noisy_voronoi import (
    FrontierPolicy,
    create_cluster,
    grow_cluster,
    noisy_voronoi,
    plain_voronoi,
    voronoi_clustering,
)
from spr.partition import distortion, validate_partition
from spr.sampling import RandomPlan
from tests.strategies import DYADIC, connected_graphs

PROPERTY_SETTINGS = settings(max_examples=50, deadline=None, suppress_health_check=[HealthCheck.too_slow])

SMALL_DYADIC = st.integers(min_value=32, max_value=128).map(lambda i: i / 64.0)


def first_round_inputs(g, index=0):
    return set(g.steiner_vertices), g.terminals[index], terminal_distances(g).dist, terminal_row(g, index)


class TestCreateCluster:
    def test_caterpillar_prefix(self, caterpillar10):
        unclustered, t, D, d = first_round_inputs(caterpillar10)
        assert create_cluster(caterpillar10, unclustered, t, 1.55, D, d) == frozenset({0, *range(10, 16)})

    def test_boundary_is_admitted(self):
        g = gen_caterpillar(10, 0.125)
        unclustered, t, D, d = first_round_inputs(g)
        assert create_cluster(g, unclustered, t, 1.625, D, d) == frozenset({0, *range(10, 16)})
        assert create_cluster(g, unclustered, t, 1.6, D, d) == frozenset({0, *range(10, 15)})

    def test_magnitude_below_one_keeps_terminal_alone(self, caterpillar10):
        unclustered, t, D, d = first_round_inputs(caterpillar10)
        assert create_cluster(caterpillar10, unclustered, t, 0.99, D, d) == frozenset({0})

    def test_star_center(self):
        g = build_graph([(0, 1, 2.0), (0, 2, 3.0), (0, 3, 5.0)], [1, 2, 3])
        unclustered, t, D, d = first_round_inputs(g, 1)
        assert create_cluster(g, unclustered, t, 1.4, D, d) == frozenset({2})
        assert create_cluster(g, unclustered, t, 1.5, D, d) == frozenset({0, 2})

    def test_only_unclustered_vertices_grow(self, caterpillar10):
        _, t, D, d = first_round_inputs(caterpillar10)
        unclustered = set(range(10, 20)) - {13}
        assert create_cluster(caterpillar10, unclustered, t, 10.0, D, d) == frozenset({0, 10, 11, 12})

    def test_frontier_peak_is_recorded(self, caterpillar10):
        unclustered, t, D, d = first_round_inputs(caterpillar10)
        state = grow_cluster(caterpillar10, unclustered, t, 1.55, D, d)
        assert state.frontier_peak == 1
        assert state.denied == {16}

    @PROPERTY_SETTINGS
    @given(g=connected_graphs(), R=st.floats(min_value=1.0, max_value=3.0))
    def test_frontier_order_does_not_matter(self, g, R):
        D = terminal_distances(g).dist
        unclustered = set(g.steiner_vertices)
        for index, t in enumerate(g.terminals):
            d = terminal_row(g, index)
            fifo = create_cluster(g, unclustered, t, R, D, d, FrontierPolicy.FIFO)
            lifo = create_cluster(g, unclustered, t, R, D, d, FrontierPolicy.LIFO)
            assert fifo == lifo

    @PROPERTY_SETTINGS
    @given(g=connected_graphs(), R=st.floats(min_value=0.5, max_value=3.0))
    def test_monotone_in_magnitude(self, g, R):
        D = terminal_distances(g).dist
        unclustered = set(g.steiner_vertices)
        d = terminal_row(g, 0)
        small = create_cluster(g, unclustered, g.terminals[0], R, D, d)
        assert small <= create_cluster(g, unclustered, g.terminals[0], 2 * R, D, d)

    @PROPERTY_SETTINGS
    @given(g=connected_graphs(), R=st.floats(min_value=1.0, max_value=3.0))
    def test_cluster_is_connected_and_admissible(self, g, R):
        D = terminal_distances(g).dist
        d = terminal_row(g, 0)
        t = g.terminals[0]
        cluster = create_cluster(g, set(g.steiner_vertices), t, R, D, d)
        assert all(d[v] <= R * D[v] for v in cluster if v != t)
        assert not cluster & (g.terminal_set - {t})


class TestNoisyVoronoi:
    def test_two_terminals_are_exact(self, gadget):
        result = noisy_voronoi(gadget, RandomPlan(seed=5))
        assert distortion(gadget, result.minor).worst == 1.0

    def test_star_center_joins_first_cluster(self):
        g = build_graph([(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0), (0, 4, 1.0)], [1, 2, 3, 4])
        result = noisy_voronoi(g, RandomPlan(seed=17))
        assert result.partition.assignment[0] == 0
        assert result.minor.edges == ((0, 1, 2.0), (0, 2, 2.0), (0, 3, 2.0))
        report = distortion(g, result.minor)
        assert report.worst == 2.0 and report.argmax_pair == (1, 2)

    def test_pinned_draws_on_caterpillar(self, caterpillar10):
        plan = RandomPlan(delta=0.05, draws=(10,) + (1,) * 9)
        result = noisy_voronoi(caterpillar10, plan)
        owners = result.partition.assignment
        assert owners[10:17] == (0,) * 7
        assert owners[17:] == (7, 8, 9)
        assert result.trace.rounds[0].cluster_size == 8
        assert result.trace.rounds[0].R == pytest.approx(1.05 ** 10)
        pairs = {(i, j) for i, j, _ in result.minor.edges}
        assert pairs == {(0, j) for j in range(1, 8)} | {(7, 8), (8, 9)}

    def test_same_seed_same_partition(self, small_random):
        first = noisy_voronoi(small_random, RandomPlan(seed=11))
        second = noisy_voronoi(small_random, RandomPlan(seed=11))
        assert first.partition == second.partition
        assert first.minor == second.minor

    def test_shuffled_order_is_followed(self, small_random):
        plan = RandomPlan(seed=2, shuffle_terminals=True)
        result = noisy_voronoi(small_random, plan)
        assert [r.terminal for r in result.trace.rounds] == plan.terminal_order(small_random.k)
        assert validate_partition(small_random, result.partition)

    def test_single_terminal(self):
        g = build_graph([(0, 1, 1.0), (1, 2, 1.0)], [1])
        result = noisy_voronoi(g)
        assert result.partition.assignment == (0, 0, 0)
        assert result.minor.edges == ()

    def test_trace_records(self, small_random):
        result = noisy_voronoi(small_random, RandomPlan(seed=1))
        records = result.trace.records()
        assert len(records) == small_random.k
        assert sum(r.cluster_size for r in records) == small_random.n

    @PROPERTY_SETTINGS
    @given(g=connected_graphs(), seed=st.integers(min_value=0, max_value=2**32))
    def test_valid_partition_and_non_contracting_minor(self, g, seed):
        result = noisy_voronoi(g, RandomPlan(seed=seed))
        assert validate_partition(g, result.partition)
        assert distortion(g, result.minor).worst >= 1 - 1e-9

    @settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])
    @given(
        g=connected_graphs(max_n=8, max_k=4, weights=SMALL_DYADIC, max_extra=4),
        seed=st.integers(min_value=0, max_value=1000),
    )
    def test_subdivision_leaves_clusters_unchanged(self, g, seed):
        plan = RandomPlan(seed=seed, delta=0.5)
        threshold = plan.resolved_delta(g.k) / 24 * min_terminal_pair_distance(g)
        h, _ = subdivide_edges(g, threshold)
        original = noisy_voronoi(g, plan)
        subdivided = noisy_voronoi(h, plan)
        assert subdivided.partition.restrict(g.n) == original.partition
        assert [(i, j) for i, j, _ in subdivided.minor.edges] == [(i, j) for i, j, _ in original.minor.edges]
        for (_, _, w), (_, _, x) in zip(subdivided.minor.edges, original.minor.edges):
            assert w == pytest.approx(x, rel=1e-12)


class TestPlainVoronoi:
    def test_caterpillar_cells(self, caterpillar10):
        p = plain_voronoi(caterpillar10)
        assert p.assignment[10:] == tuple(range(10))

    def test_ties_go_to_lower_index(self):
        g = build_graph([(0, 1, 1.0), (1, 2, 1.0)], [2, 0])
        assert plain_voronoi(g).assignment == (1, 0, 0)

    def test_clustering_result(self, caterpillar10):
        result = voronoi_clustering(caterpillar10)
        assert result.trace.algorithm == "voronoi" and result.trace.seed is None
        assert len(result.minor.edges) == 9

    @PROPERTY_SETTINGS
    @given(g=connected_graphs(weights=DYADIC))
    def test_cells_are_valid(self, g):
        assert validate_partition(g, plain_voronoi(g))
