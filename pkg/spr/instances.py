"""
Instance generators.

Numbering is fixed so traces compare across runs: terminals come first
(ids 0..k-1, terminal index == vertex id), then spine or internal vertices,
then any extra vertex.
"""

import math
from typing import List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from spr.errors import InvalidParameters
from spr.graph_core import Edge, WeightedGraph, build_graph
from spr.sampling import default_delta

Family = Literal["caterpillar", "bg_lower_bound", "binary_tree", "random"]

DEFAULT_WEIGHT_RANGE = (1.0, 10.0)


def _check_k(k: int) -> None:
    if k < 2:
        raise InvalidParameters("need at least two terminals", k=k)


def _check_epsilon(epsilon: float, upper: float = math.inf) -> None:
    if not 0.0 < epsilon < upper or math.isnan(epsilon):
        raise InvalidParameters("epsilon out of range", epsilon=epsilon, upper=upper)


def caterpillar_epsilon(k: int) -> float:
    """eps = 14 delta = 14 / (20 ln k), the Omega(log k) preset."""
    return 14.0 * default_delta(k)


def bg_lower_bound_epsilon(k: int, c: float = 1.0) -> float:
    """eps = c / sqrt(ln k), the Omega(sqrt(log k)) preset for ball growing."""
    _check_k(k)
    return c / math.sqrt(math.log(k))


def gen_caterpillar(k: int, epsilon: float) -> WeightedGraph:
    """Spine v_0..v_{k-1} (ids k..2k-1) with eps edges; t_j (id j) hangs off
    v_j on a unit edge."""
    _check_k(k)
    _check_epsilon(epsilon)
    edges: List[Edge] = [(j, k + j, 1.0) for j in range(k)]
    edges += [(k + j, k + j + 1, epsilon) for j in range(k - 1)]
    return build_graph(edges, range(k), vertex_count=2 * k)


def gen_bg_lower_bound(k: int, epsilon: float) -> WeightedGraph:
    """Caterpillar with pendant edges 2-eps and spine edges 2 eps, plus a
    Steiner leaf (id 2k) on t_0 at distance 1."""
    _check_k(k)
    _check_epsilon(epsilon, upper=2.0)
    edges: List[Edge] = [(j, k + j, 2.0 - epsilon) for j in range(k)]
    edges += [(k + j, k + j + 1, 2.0 * epsilon) for j in range(k - 1)]
    edges.append((0, 2 * k, 1.0))
    return build_graph(edges, range(k), vertex_count=2 * k + 1)


def gen_binary_tree(depth: int) -> WeightedGraph:
    """Complete binary tree with unit weights; the 2^depth leaves are the
    terminals and take ids 0..2^depth-1, internal nodes follow in heap order."""
    if depth < 1:
        raise InvalidParameters("depth must be at least 1", depth=depth)
    leaves = 2 ** depth
    first_leaf = leaves - 1

    def vertex_id(h: int) -> int:
        return h - first_leaf if h >= first_leaf else leaves + h

    edges: List[Edge] = []
    for h in range(first_leaf):
        edges.append((vertex_id(h), vertex_id(2 * h + 1), 1.0))
        edges.append((vertex_id(h), vertex_id(2 * h + 2), 1.0))
    return build_graph(edges, range(leaves), vertex_count=2 * leaves - 1)


def gen_random(
    n: int,
    m: int,
    k: int,
    seed: int = 0,
    weight_range: Tuple[float, float] = DEFAULT_WEIGHT_RANGE,
) -> WeightedGraph:
    """Random spanning tree plus m-n+1 distinct extra edges, uniform weights,
    k distinct random terminals."""
    if n < 1 or k < 1 or k > n:
        raise InvalidParameters("need 1 <= k <= n", n=n, k=k)
    if m < n - 1 or m > n * (n - 1) // 2:
        raise InvalidParameters("need n-1 <= m <= n(n-1)/2", n=n, m=m)
    low, high = weight_range
    if not 0.0 < low <= high or not math.isfinite(high):
        raise InvalidParameters("weight range must satisfy 0 < low <= high", low=low, high=high)

    rng = np.random.default_rng(seed)
    order = rng.permutation(n)
    pairs = set()
    edges: List[Tuple[int, int]] = []
    if n > 1:
        anchors = (rng.random(n - 1) * np.arange(1, n)).astype(np.int64)
        for i in range(1, n):
            u, v = int(order[i]), int(order[anchors[i - 1]])
            key = (u, v) if u < v else (v, u)
            pairs.add(key)
            edges.append(key)
    while len(edges) < m:
        batch = rng.integers(0, n, size=(2 * (m - len(edges)) + 16, 2))
        for u, v in batch.tolist():
            if u == v:
                continue
            key = (u, v) if u < v else (v, u)
            if key in pairs:
                continue
            pairs.add(key)
            edges.append(key)
            if len(edges) == m:
                break
    weights = rng.uniform(low, high, size=len(edges))
    terminals = rng.choice(n, size=k, replace=False)
    return build_graph(
        [(u, v, float(w)) for (u, v), w in zip(edges, weights)],
        terminals.tolist(),
        vertex_count=n,
    )


class InstanceSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    family: Family
    k: Optional[int] = None
    epsilon: Optional[float] = None
    depth: Optional[int] = None
    n: Optional[int] = None
    m: Optional[int] = None
    seed: int = 0
    weight_range: Tuple[float, float] = DEFAULT_WEIGHT_RANGE

    def _require(self, *names: str) -> None:
        missing = [name for name in names if getattr(self, name) is None]
        if missing:
            raise InvalidParameters(f"{self.family} needs {', '.join(missing)}")

    def build(self) -> WeightedGraph:
        if self.family == "caterpillar":
            self._require("k", "epsilon")
            return gen_caterpillar(self.k, self.epsilon)
        if self.family == "bg_lower_bound":
            self._require("k", "epsilon")
            return gen_bg_lower_bound(self.k, self.epsilon)
        if self.family == "binary_tree":
            self._require("depth")
            return gen_binary_tree(self.depth)
        self._require("n", "m", "k")
        return gen_random(self.n, self.m, self.k, self.seed, self.weight_range)

    def describe(self) -> str:
        fields = self.model_dump(exclude_none=True, exclude={"weight_range"} if self.family != "random" else set())
        return " ".join(f"{key}={value}" for key, value in fields.items())
