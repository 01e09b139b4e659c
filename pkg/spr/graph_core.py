"""
Weighted graph representation and shortest-path primitives.

Graphs are immutable after ``build_graph``: parallel edges are collapsed to
their lightest copy, adjacency lists are sorted by neighbor id, and the graph
is checked to be connected. All searches break ties by (distance, vertex id)
so every run over the same graph is reproducible.
"""

import math
from dataclasses import dataclass, field
from functools import cached_property
from heapq import heappop, heappush
from typing import Collection, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components
from scipy.sparse.csgraph import dijkstra as csgraph_dijkstra

from spr.errors import (
    DisconnectedGraph,
    DuplicateTerminal,
    FewerThanTwoTerminals,
    InvalidParameter,
    NonPositiveWeight,
    SelfLoop,
    TerminalOutOfRange,
    VertexOutOfRange,
)

SUPER_SOURCE = -1

# Terminal rows are pulled from the C shortest-path routine in blocks of this
# many sources to bound the k x n intermediate.
_MATRIX_BLOCK = 256

Edge = Tuple[int, int, float]
Arc = Tuple[int, float, int]


@dataclass(frozen=True)
class WeightedGraph:
    """Undirected, positively weighted graph with an ordered terminal list."""

    vertex_count: int
    edges: Tuple[Edge, ...]
    adjacency: Tuple[Tuple[Arc, ...], ...]
    terminals: Tuple[int, ...]
    _cache: Dict[str, object] = field(default_factory=dict, compare=False, repr=False)

    @property
    def n(self) -> int:
        return self.vertex_count

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def k(self) -> int:
        return len(self.terminals)

    @cached_property
    def terminal_index(self) -> Dict[int, int]:
        return {t: i for i, t in enumerate(self.terminals)}

    @cached_property
    def terminal_set(self) -> FrozenSet[int]:
        return frozenset(self.terminals)

    @cached_property
    def steiner_vertices(self) -> Tuple[int, ...]:
        return tuple(v for v in range(self.vertex_count) if v not in self.terminal_set)

    def is_terminal(self, v: int) -> bool:
        return v in self.terminal_set

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def weight(self, u: int, v: int) -> Optional[float]:
        for nbr, w, _ in self.adjacency[u]:
            if nbr == v:
                return w
        return None

    def to_csr(self) -> csr_matrix:
        """Symmetric sparse adjacency matrix, built once per graph."""
        cached = self._cache.get("csr")
        if cached is None:
            if self.edges:
                us, vs, ws = zip(*self.edges)
            else:
                us, vs, ws = (), (), ()
            rows = np.asarray(us + vs, dtype=np.int64)
            cols = np.asarray(vs + us, dtype=np.int64)
            data = np.asarray(ws + ws, dtype=np.float64)
            cached = csr_matrix((data, (rows, cols)), shape=(self.vertex_count, self.vertex_count))
            self._cache["csr"] = cached
        return cached

    def scaled(self, factor: float) -> "WeightedGraph":
        if not factor > 0 or not math.isfinite(factor):
            raise InvalidParameter("scale factor must be positive and finite", factor=factor)
        return build_graph(
            [(u, v, w * factor) for u, v, w in self.edges],
            self.terminals,
            vertex_count=self.vertex_count,
        )


@dataclass(frozen=True)
class DistanceMap:
    """Shortest-path distances from one source, or from all terminals at once.

    ``origin`` is only set for the multi-source form and holds, per vertex,
    the index of the terminal realizing D(v) (ties go to the smaller index).
    """

    source: int
    dist: np.ndarray
    parent: np.ndarray
    origin: Optional[np.ndarray] = None

    def __getitem__(self, v: int) -> float:
        return float(self.dist[v])

    def __len__(self) -> int:
        return len(self.dist)

    def path_to(self, v: int) -> List[int]:
        if not math.isfinite(self.dist[v]):
            return []
        path = [v]
        while self.parent[path[-1]] >= 0:
            path.append(int(self.parent[path[-1]]))
        path.reverse()
        return path


@dataclass(frozen=True)
class SubdivisionRecord:
    """One over-threshold edge replaced by a chain of equal halvings."""

    original_edge: int
    endpoints: Tuple[int, int]
    chain: Tuple[int, ...]
    weights: Tuple[float, ...]

    def total_weight(self) -> float:
        return math.fsum(self.weights)

    def path(self) -> Tuple[int, ...]:
        return (self.endpoints[0],) + self.chain + (self.endpoints[1],)


def build_graph(
    edge_list: Iterable[Sequence],
    terminal_list: Iterable[int],
    vertex_count: Optional[int] = None,
    check_connected: bool = True,
) -> WeightedGraph:
    """Validate an edge list and terminal list and build an immutable graph.

    When ``vertex_count`` is omitted it is inferred from the largest id used
    by an edge, so terminals must name vertices that appear in some edge.
    """
    raw_edges: List[Edge] = []
    for item in edge_list:
        u, v, w = int(item[0]), int(item[1]), float(item[2])
        raw_edges.append((u, v, w))

    if vertex_count is None:
        vertex_count = 1 + max((max(u, v) for u, v, _ in raw_edges), default=-1)
    if vertex_count < 1:
        raise InvalidParameter("graph needs at least one vertex", vertex_count=vertex_count)

    best: Dict[Tuple[int, int], float] = {}
    for u, v, w in raw_edges:
        if not (0 <= u < vertex_count and 0 <= v < vertex_count):
            raise VertexOutOfRange("edge endpoint out of range", u=u, v=v, n=vertex_count)
        if u == v:
            raise SelfLoop("self-loops are not allowed", vertex=u)
        if math.isnan(w) or math.isinf(w):
            raise InvalidParameter("edge weight must be finite", u=u, v=v, w=w)
        if w <= 0:
            raise NonPositiveWeight("edge weights must be strictly positive", u=u, v=v, w=w)
        key = (u, v) if u < v else (v, u)
        current = best.get(key)
        if current is None or w < current:
            best[key] = w

    terminals = tuple(int(t) for t in terminal_list)
    if not terminals:
        raise InvalidParameter("at least one terminal is required")
    seen = set()
    for t in terminals:
        if not 0 <= t < vertex_count:
            raise TerminalOutOfRange("terminal id out of range", terminal=t, n=vertex_count)
        if t in seen:
            raise DuplicateTerminal("terminal listed twice", terminal=t)
        seen.add(t)

    edges = tuple((u, v, w) for (u, v), w in sorted(best.items()))
    arcs: List[List[Arc]] = [[] for _ in range(vertex_count)]
    for eid, (u, v, w) in enumerate(edges):
        arcs[u].append((v, w, eid))
        arcs[v].append((u, w, eid))
    adjacency = tuple(tuple(sorted(a)) for a in arcs)

    g = WeightedGraph(vertex_count=vertex_count, edges=edges, adjacency=adjacency, terminals=terminals)
    if check_connected:
        reached = _reachable_count(g, terminals[0])
        if reached != vertex_count:
            raise DisconnectedGraph(
                "graph is not connected", reachable=reached, n=vertex_count
            )
    return g


def _reachable_count(g: WeightedGraph, start: int) -> int:
    _, labels = connected_components(g.to_csr(), directed=False)
    return int(np.count_nonzero(labels == labels[start]))


def _search(
    g: WeightedGraph,
    seeds: Sequence[Tuple[int, int]],
    within: Optional[Collection[int]] = None,
    radius: Optional[float] = None,
) -> Tuple[List[float], List[int], List[int]]:
    """Dijkstra over (distance, origin tag, vertex) keys.

    ``seeds`` are (vertex, tag) pairs starting at distance 0. Relaxations that
    tie on distance keep the smaller tag, which is how the multi-source run
    assigns every vertex to its lowest-index nearest terminal.
    """
    n = g.vertex_count
    dist = [math.inf] * n
    parent = [-1] * n
    origin = [-1] * n
    done = [False] * n
    heap: List[Tuple[float, int, int]] = []
    for vertex, tag in seeds:
        if dist[vertex] == 0.0 and origin[vertex] <= tag:
            continue
        dist[vertex] = 0.0
        origin[vertex] = tag
        heappush(heap, (0.0, tag, vertex))

    adjacency = g.adjacency
    while heap:
        d, tag, v = heappop(heap)
        if done[v]:
            continue
        done[v] = True
        for u, w, _ in adjacency[v]:
            if done[u]:
                continue
            if within is not None and u not in within:
                continue
            nd = d + w
            if radius is not None and nd > radius:
                continue
            du = dist[u]
            if nd < du or (nd == du and tag < origin[u]):
                dist[u] = nd
                origin[u] = tag
                parent[u] = v
                heappush(heap, (nd, tag, u))
    return dist, parent, origin


def _check_vertex(g: WeightedGraph, v: int) -> None:
    if not 0 <= v < g.vertex_count:
        raise VertexOutOfRange("vertex out of range", vertex=v, n=g.vertex_count)


def dijkstra(
    g: WeightedGraph,
    source: int,
    within: Optional[Collection[int]] = None,
    radius: Optional[float] = None,
) -> DistanceMap:
    """Single-source shortest paths.

    ``within`` restricts the search to a vertex subset (the source is always
    allowed), giving distances in the induced subgraph. ``radius`` truncates
    the search; vertices beyond it stay at infinity.
    """
    _check_vertex(g, source)
    dist, parent, _ = _search(g, [(source, 0)], within=within, radius=radius)
    return DistanceMap(
        source=source,
        dist=np.asarray(dist, dtype=np.float64),
        parent=np.asarray(parent, dtype=np.int64),
    )


def terminal_distances(g: WeightedGraph) -> DistanceMap:
    """D(v) for every vertex via one run from a virtual super source.

    The super source is joined to every terminal by a zero-weight edge, which
    is the same as seeding every terminal at distance 0.
    """
    if g.k < 1:
        raise InvalidParameter("terminal distances need at least one terminal")
    cached = g._cache.get("terminal_distances")
    if cached is None:
        seeds = [(t, i) for i, t in enumerate(g.terminals)]
        dist, parent, origin = _search(g, seeds)
        cached = DistanceMap(
            source=SUPER_SOURCE,
            dist=np.asarray(dist, dtype=np.float64),
            parent=np.asarray(parent, dtype=np.int64),
            origin=np.asarray(origin, dtype=np.int64),
        )
        g._cache["terminal_distances"] = cached
    return cached


def terminal_row(g: WeightedGraph, index: int) -> np.ndarray:
    """d_G(t_index, v) for all v, computed once per terminal and cached."""
    rows = g._cache.setdefault("terminal_rows", {})
    row = rows.get(index)
    if row is None:
        t = g.terminals[index]
        row = csgraph_dijkstra(g.to_csr(), directed=False, indices=t)
        rows[index] = row
    return row


def terminal_distance_matrix(g: WeightedGraph) -> np.ndarray:
    """k x k matrix of d_G(t_i, t_j), one shortest-path run per terminal."""
    cached = g._cache.get("terminal_matrix")
    if cached is None:
        terminals = np.asarray(g.terminals, dtype=np.int64)
        csr = g.to_csr()
        cached = np.empty((g.k, g.k), dtype=np.float64)
        for start in range(0, g.k, _MATRIX_BLOCK):
            block = terminals[start:start + _MATRIX_BLOCK]
            rows = csgraph_dijkstra(csr, directed=False, indices=block)
            cached[start:start + len(block)] = rows[:, terminals]
        g._cache["terminal_matrix"] = cached
    return cached


def min_terminal_pair_distance(g: WeightedGraph) -> float:
    """The smallest distance between two distinct terminals."""
    if g.k < 2:
        raise FewerThanTwoTerminals("need at least two terminals", k=g.k)
    matrix = terminal_distance_matrix(g)
    off_diagonal = matrix[~np.eye(g.k, dtype=bool)]
    return float(off_diagonal.min())


def shortest_path(g: WeightedGraph, source: int, target: int) -> List[int]:
    _check_vertex(g, target)
    return dijkstra(g, source).path_to(target)


def ball(
    g: WeightedGraph,
    source: int,
    radius: float,
    within: Optional[Collection[int]] = None,
) -> Tuple[Dict[int, float], float]:
    """Vertices at distance at most ``radius`` from ``source``.

    Returns the reached vertices with their distances and the smallest
    tentative distance that fell outside the radius (infinity when the search
    exhausted the allowed subgraph). Storage is proportional to the explored
    region, not to the graph.
    """
    dist: Dict[int, float] = {source: 0.0}
    done = set()
    beyond = math.inf
    heap: List[Tuple[float, int]] = [(0.0, source)]
    adjacency = g.adjacency
    while heap:
        d, v = heappop(heap)
        if v in done:
            continue
        done.add(v)
        for u, w, _ in adjacency[v]:
            if u in done:
                continue
            if within is not None and u not in within:
                continue
            nd = d + w
            if nd > radius:
                if nd < beyond:
                    beyond = nd
                continue
            if nd < dist.get(u, math.inf):
                dist[u] = nd
                heappush(heap, (nd, u))
    # ``beyond`` lower-bounds the distance of every vertex left outside the ball.
    return dist, beyond


def subdivide_edges(g: WeightedGraph, threshold: float) -> Tuple[WeightedGraph, List[SubdivisionRecord]]:
    """Halve every edge heavier than ``threshold`` until all pieces fit.

    Original vertex ids and terminals are kept; created vertices are appended
    in edge order, each chain running from the lower endpoint to the higher.
    """
    if not threshold > 0:
        raise InvalidParameter("subdivision threshold must be positive", threshold=threshold)
    next_id = g.vertex_count
    new_edges: List[Edge] = []
    records: List[SubdivisionRecord] = []
    for eid, (u, v, w) in enumerate(g.edges):
        if w <= threshold:
            new_edges.append((u, v, w))
            continue
        piece, count = w, 1
        while piece > threshold:
            piece /= 2.0
            count *= 2
        chain = tuple(range(next_id, next_id + count - 1))
        next_id += count - 1
        path = (u,) + chain + (v,)
        for a, b in zip(path, path[1:]):
            new_edges.append((a, b, piece))
        records.append(
            SubdivisionRecord(original_edge=eid, endpoints=(u, v), chain=chain, weights=(piece,) * count)
        )
    subdivided = build_graph(new_edges, g.terminals, vertex_count=next_id)
    return subdivided, records
