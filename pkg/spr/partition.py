"""
Terminal partitions, induced minors and distortion.

A partition assigns every vertex a cluster index in ``0..k-1``; cluster ``i``
must contain terminal ``g.terminals[i]`` and be connected. Contracting the
clusters gives the induced minor on the terminals, weighted either by the
global terminal distance (``WeightMode.GLOBAL``) or by the shortest path that
stays inside the two clusters and crosses between them once
(``WeightMode.SINGLE_CROSSING``).
"""

import math
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Collection, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from spr.errors import InvalidParameter, MissingClusterDistances
from spr.graph_core import WeightedGraph, build_graph, dijkstra, terminal_distance_matrix
from spr.schemas import MinorEdgeRecord, MinorRecord

UNASSIGNED = -1

MinorEdge = Tuple[int, int, float]


class WeightMode(str, Enum):
    GLOBAL = "global"
    SINGLE_CROSSING = "single_crossing"


class PartitionViolation(str, Enum):
    UNASSIGNED_VERTEX = "UnassignedVertex"
    TERMINAL_IN_WRONG_CLUSTER = "TerminalInWrongCluster"
    DISCONNECTED_CLUSTER = "DisconnectedCluster"


@dataclass(frozen=True)
class PartitionCheck:
    """Outcome of ``validate_partition``; truthy when the partition is valid."""

    violation: Optional[PartitionViolation] = None
    cluster: Optional[int] = None
    vertex: Optional[int] = None
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.violation is None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class TerminalPartition:
    assignment: Tuple[int, ...]
    k: int

    @classmethod
    def from_assignment(cls, assignment: Iterable[int], k: int) -> "TerminalPartition":
        return cls(assignment=tuple(int(a) for a in assignment), k=k)

    @classmethod
    def from_clusters(cls, vertex_count: int, clusters: Sequence[Collection[int]]) -> "TerminalPartition":
        assignment = [UNASSIGNED] * vertex_count
        for index, members in enumerate(clusters):
            for v in members:
                assignment[v] = index
        return cls(assignment=tuple(assignment), k=len(clusters))

    @cached_property
    def cluster_members(self) -> Tuple[Tuple[int, ...], ...]:
        members: List[List[int]] = [[] for _ in range(self.k)]
        for v, index in enumerate(self.assignment):
            if 0 <= index < self.k:
                members[index].append(v)
        return tuple(tuple(m) for m in members)

    def sizes(self) -> List[int]:
        return [len(m) for m in self.cluster_members]

    def restrict(self, vertex_count: int) -> "TerminalPartition":
        """Drop vertices with id >= vertex_count (subdivision vertices are appended)."""
        return TerminalPartition(assignment=self.assignment[:vertex_count], k=self.k)


def validate_partition(g: WeightedGraph, p: TerminalPartition) -> PartitionCheck:
    """Checks coverage, terminal membership and per-cluster connectivity.

    Violations are reported, not raised; the first one found wins.
    """
    if len(p.assignment) != g.vertex_count:
        return PartitionCheck(
            PartitionViolation.UNASSIGNED_VERTEX,
            detail=f"assignment covers {len(p.assignment)} of {g.vertex_count} vertices",
        )
    if p.k != g.k:
        return PartitionCheck(
            PartitionViolation.UNASSIGNED_VERTEX,
            detail=f"partition has {p.k} clusters for {g.k} terminals",
        )
    for v, index in enumerate(p.assignment):
        if not 0 <= index < p.k:
            return PartitionCheck(PartitionViolation.UNASSIGNED_VERTEX, vertex=v, detail="vertex has no cluster")
    for index, t in enumerate(g.terminals):
        if p.assignment[t] != index:
            return PartitionCheck(
                PartitionViolation.TERMINAL_IN_WRONG_CLUSTER,
                cluster=index,
                vertex=t,
                detail=f"terminal sits in cluster {p.assignment[t]}",
            )

    assignment = p.assignment
    adjacency = g.adjacency
    seen = [False] * g.vertex_count
    for index, t in enumerate(g.terminals):
        # BFS from the terminal through same-cluster neighbors only
        seen[t] = True
        queue = deque([t])
        reached = 1
        while queue:
            v = queue.popleft()
            for u, _, _ in adjacency[v]:
                if not seen[u] and assignment[u] == index:
                    seen[u] = True
                    reached += 1
                    queue.append(u)
        size = len(p.cluster_members[index])
        if reached != size:
            stray = next(v for v in p.cluster_members[index] if not seen[v])
            return PartitionCheck(
                PartitionViolation.DISCONNECTED_CLUSTER,
                cluster=index,
                vertex=stray,
                detail=f"{size - reached} of {size} vertices unreachable inside the cluster",
            )
    return PartitionCheck()


@dataclass(frozen=True)
class InducedMinor:
    terminals: Tuple[int, ...]
    edges: Tuple[MinorEdge, ...]
    weight_mode: WeightMode
    _cache: Dict[str, object] = field(default_factory=dict, compare=False, repr=False)

    @property
    def k(self) -> int:
        return len(self.terminals)

    def edge_map(self) -> Dict[Tuple[int, int], float]:
        return {(i, j): w for i, j, w in self.edges}

    def as_graph(self) -> WeightedGraph:
        """The minor as a graph on vertices 0..k-1, each its own terminal."""
        cached = self._cache.get("graph")
        if cached is None:
            cached = build_graph(self.edges, range(self.k), vertex_count=self.k)
            self._cache["graph"] = cached
        return cached

    def distance_matrix(self) -> np.ndarray:
        """All-pairs d_M between terminals, one shortest-path run per terminal."""
        return terminal_distance_matrix(self.as_graph())

    def to_record(
        self,
        algorithm: str,
        seed: Optional[int] = None,
        report: Optional["DistortionReport"] = None,
        scale: float = 1.0,
    ) -> MinorRecord:
        return MinorRecord(
            algorithm=algorithm,
            seed=seed,
            weight_mode=self.weight_mode.value,
            terminals=list(self.terminals),
            edges=[MinorEdgeRecord(i=i, j=j, w=w) for i, j, w in self.edges],
            distortion_worst=report.worst if report is not None else None,
            argmax_pair=report.argmax_pair if report is not None else None,
            scale=scale,
        )

    @classmethod
    def from_record(cls, record: MinorRecord) -> "InducedMinor":
        edges = tuple(sorted((min(e.i, e.j), max(e.i, e.j), e.w) for e in record.edges))
        return cls(
            terminals=tuple(record.terminals),
            edges=edges,
            weight_mode=WeightMode(record.weight_mode),
        )


@dataclass(frozen=True)
class DistortionReport:
    per_pair: np.ndarray
    worst: float
    argmax_pair: Tuple[int, int]


def crossing_pairs(g: WeightedGraph, p: TerminalPartition) -> Dict[Tuple[int, int], List[int]]:
    """Cluster pairs (i < j) joined by at least one edge, with the edge ids."""
    assignment = p.assignment
    pairs: Dict[Tuple[int, int], List[int]] = {}
    for eid, (u, v, _) in enumerate(g.edges):
        i, j = assignment[u], assignment[v]
        if i == j:
            continue
        key = (i, j) if i < j else (j, i)
        pairs.setdefault(key, []).append(eid)
    return pairs


def induce_minor(
    g: WeightedGraph,
    p: TerminalPartition,
    mode: WeightMode = WeightMode.GLOBAL,
    cluster_distances: Optional[Sequence[float]] = None,
) -> InducedMinor:
    """Contract every cluster onto its terminal.

    In single-crossing mode ``cluster_distances[v]`` must hold
    d_{G[V_i]}(t_i, v) for the cluster V_i containing v, and the weight of
    (i, j) is the lightest ``cd[u] + w(u, v) + cd[v]`` over crossing edges.
    """
    mode = WeightMode(mode)
    pairs = crossing_pairs(g, p)
    edges: List[MinorEdge] = []
    if mode is WeightMode.GLOBAL:
        matrix = terminal_distance_matrix(g)
        for i, j in sorted(pairs):
            edges.append((i, j, float(matrix[i, j])))
    else:
        if cluster_distances is None:
            raise MissingClusterDistances("single-crossing weights need in-cluster distances")
        cd = np.asarray(cluster_distances, dtype=np.float64)
        if cd.shape != (g.vertex_count,) or not np.all(np.isfinite(cd)):
            raise MissingClusterDistances(
                "in-cluster distance missing for some vertex", expected=g.vertex_count
            )
        for (i, j), eids in sorted(pairs.items()):
            best = math.inf
            for eid in eids:
                u, v, w = g.edges[eid]
                candidate = cd[u] + w + cd[v]
                if candidate < best:
                    best = candidate
            edges.append((i, j, float(best)))
    return InducedMinor(terminals=g.terminals, edges=tuple(edges), weight_mode=mode)


def single_crossing_distance(
    g: WeightedGraph,
    cluster_i: Collection[int],
    cluster_j: Collection[int],
    t_i: int,
    t_j: int,
) -> Optional[float]:
    """Shortest t_i - t_j path inside V_i + V_j that crosses between them exactly once."""
    set_i, set_j = frozenset(cluster_i), frozenset(cluster_j)
    from_i = dijkstra(g, t_i, within=set_i)
    from_j = dijkstra(g, t_j, within=set_j)
    best = math.inf
    for u, v, w in g.edges:
        if u in set_i and v in set_j:
            candidate = from_i[u] + w + from_j[v]
        elif v in set_i and u in set_j:
            candidate = from_i[v] + w + from_j[u]
        else:
            continue
        if candidate < best:
            best = candidate
    return None if math.isinf(best) else best


def distortion(
    g: WeightedGraph,
    m: InducedMinor,
    terminal_matrix: Optional[np.ndarray] = None,
) -> DistortionReport:
    """Ratios d_M / d_G over all terminal pairs.

    Pass ``terminal_matrix`` to reuse d_G across many minors of the same graph.
    The worst pair is the first maximum in row-major order over i < j.
    """
    if m.k != g.k:
        raise InvalidParameter("minor and graph disagree on k", minor_k=m.k, graph_k=g.k)
    k = g.k
    if k < 2:
        return DistortionReport(per_pair=np.ones((k, k)), worst=1.0, argmax_pair=(0, 0))
    dg = terminal_distance_matrix(g) if terminal_matrix is None else terminal_matrix
    dm = m.distance_matrix()
    per_pair = np.ones((k, k), dtype=np.float64)
    off = ~np.eye(k, dtype=bool)
    per_pair[off] = dm[off] / dg[off]
    rows, cols = np.triu_indices(k, 1)
    upper = per_pair[rows, cols]
    best = int(np.argmax(upper))
    return DistortionReport(
        per_pair=per_pair,
        worst=float(upper[best]),
        argmax_pair=(int(rows[best]), int(cols[best])),
    )
