import pytest

from spr.graph_core import build_graph
from spr.instances import gen_caterpillar, gen_random


@pytest.fixture
def caterpillar10():
    return gen_caterpillar(10, 0.1)


@pytest.fixture
def small_random():
    return gen_random(60, 150, 6, seed=3)


@pytest.fixture
def gadget():
    """t_0=0, x=1, y=2, t_1=3; the single-crossing path costs 11, the global one 3."""
    edges = [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (0, 2, 10.0), (1, 3, 10.0)]
    return build_graph(edges, [0, 3])
