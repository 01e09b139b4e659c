"""
Fast Noisy-Voronoi.

Clusters grow Dijkstra-style: the frontier is an addressable heap keyed by
the distance to t_j inside the cluster grown so far, and v is admitted when
that in-cluster distance is at most R_j * D(v). The key a vertex has when it
leaves the heap is final, so minor weights come from one pass over the edges
using those keys instead of any further shortest-path runs.
"""

from dataclasses import dataclass
from typing import Collection, Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from spr.errors import IncompleteRecords, InvariantViolation
from spr.graph_core import WeightedGraph, terminal_distances
from spr.heap import AddressableHeap
from spr.noisy_voronoi import ClusteringResult, ClusteringTrace, RoundTrace, trivial_result
from spr.partition import InducedMinor, TerminalPartition, WeightMode, induce_minor
from spr.sampling import RandomPlan, magnitude
from spr.utils_logging import get_logger, kv

IN_FRONTIER = 1
IN_CLUSTER = 2
DENIED = 3


class LabeledFrontier:
    """Heap plus per-vertex membership flags, reusable across rounds.

    Flags are valid only when their stamp equals the current version, so
    ``reset`` clears every flag in O(1) by bumping the version.
    """

    def __init__(self, vertex_count: int):
        self.heap = AddressableHeap()
        self._state = [0] * vertex_count
        self._stamp = [0] * vertex_count
        self.version = 1
        self.peak = 0

    def reset(self) -> None:
        self.version += 1
        self.peak = 0
        self.heap.clear()

    def status(self, v: int) -> int:
        return self._state[v] if self._stamp[v] == self.version else 0

    def mark(self, v: int, state: int) -> None:
        self._state[v] = state
        self._stamp[v] = self.version


@dataclass(frozen=True)
class ExtractionRecord:
    """Per-vertex extraction key and owning cluster; NaN / -1 where unset."""

    keys: np.ndarray
    owner: np.ndarray

    @classmethod
    def empty(cls, vertex_count: int) -> "ExtractionRecord":
        return cls(
            keys=np.full(vertex_count, np.nan, dtype=np.float64),
            owner=np.full(vertex_count, -1, dtype=np.int64),
        )

    def is_complete(self) -> bool:
        return bool(np.all(np.isfinite(self.keys)) and np.all(self.owner >= 0))


@dataclass(frozen=True)
class FastClusteringTrace(ClusteringTrace):
    extraction: Optional[ExtractionRecord] = None
    inserts: int = 0
    decreases: int = 0
    extractions: int = 0


def fast_create_cluster(
    g: WeightedGraph,
    unclustered: Collection[int],
    t_j: int,
    R_j: float,
    D: Sequence[float],
    frontier: Optional[LabeledFrontier] = None,
) -> Tuple[Set[int], Dict[int, float]]:
    """Grow one cluster; returns its vertices and the extraction keys of the
    admitted Steiner vertices in extraction order.

    Raises InvariantViolation if an extraction key ever drops below the
    previous one.
    """
    if frontier is None:
        frontier = LabeledFrontier(g.vertex_count)
    else:
        frontier.reset()
    heap = frontier.heap
    adjacency = g.adjacency
    cluster = {t_j}
    keys: Dict[int, float] = {}
    frontier.mark(t_j, IN_CLUSTER)

    def relax(v: int, base: float) -> None:
        for u, w, _ in adjacency[v]:
            if u not in unclustered:
                continue
            status = frontier.status(u)
            if status == IN_CLUSTER or status == DENIED:
                continue
            candidate = base + w
            if status == IN_FRONTIER:
                if candidate < heap.key(u):
                    heap.decrease_key(u, candidate)
            else:
                frontier.mark(u, IN_FRONTIER)
                heap.push(u, candidate)

    relax(t_j, 0.0)
    frontier.peak = len(heap)
    last = 0.0
    while heap:
        v, key = heap.pop()
        if key < last:
            raise InvariantViolation("extraction keys decreased", terminal=t_j, vertex=v, key=key, previous=last)
        last = key
        if key <= R_j * D[v]:
            frontier.mark(v, IN_CLUSTER)
            cluster.add(v)
            keys[v] = key
            relax(v, key)
            if len(heap) > frontier.peak:
                frontier.peak = len(heap)
        else:
            frontier.mark(v, DENIED)
    return cluster, keys


def minor_from_extraction(g: WeightedGraph, partition: TerminalPartition, records: ExtractionRecord) -> InducedMinor:
    """Single-crossing minor from one scan over the edges."""
    if len(records.keys) != g.vertex_count or not records.is_complete():
        missing = int(np.count_nonzero(~np.isfinite(records.keys))) if len(records.keys) == g.vertex_count else None
        raise IncompleteRecords("extraction keys missing", missing=missing, n=g.vertex_count)
    return induce_minor(g, partition, WeightMode.SINGLE_CROSSING, cluster_distances=records.keys)


def fast_noisy_voronoi(g: WeightedGraph, plan: Optional[RandomPlan] = None) -> ClusteringResult:
    plan = plan or RandomPlan()
    if g.k < 2:
        return trivial_result(g, "fast", WeightMode.SINGLE_CROSSING, plan.seed)
    logger = get_logger(__name__, seed=plan.seed)
    delta = plan.resolved_delta(g.k)
    draws = plan.draws_for(g.k)
    D = terminal_distances(g).dist.tolist()

    unclustered = set(g.steiner_vertices)
    records = ExtractionRecord.empty(g.vertex_count)
    for index, t in enumerate(g.terminals):
        records.keys[t] = 0.0
        records.owner[t] = index
    frontier = LabeledFrontier(g.vertex_count)
    heap = frontier.heap
    rounds: List[RoundTrace] = []
    for j in plan.terminal_order(g.k):
        R = magnitude(draws[j], delta)
        before = (heap.inserts, heap.decreases, heap.extractions)
        cluster, keys = fast_create_cluster(g, unclustered, g.terminals[j], R, D, frontier)
        for v, key in keys.items():
            records.keys[v] = key
            records.owner[v] = j
        unclustered.difference_update(keys)
        inserts = heap.inserts - before[0]
        rounds.append(
            RoundTrace(
                terminal=j,
                g=draws[j],
                R=R,
                cluster_size=len(cluster),
                frontier_peak=frontier.peak,
                inserts=inserts,
                decreases=heap.decreases - before[1],
                extractions=heap.extractions - before[2],
            )
        )
        logger.debug(f"round {kv(j=j, g=draws[j], R=R, size=len(cluster), inserts=inserts)}")

    if unclustered:
        raise InvariantViolation("vertices left unclustered", count=len(unclustered), seed=plan.seed)
    partition = TerminalPartition.from_assignment(records.owner.tolist(), g.k)
    minor = minor_from_extraction(g, partition, records)
    trace = FastClusteringTrace(
        algorithm="fast",
        seed=plan.seed,
        rounds=tuple(rounds),
        extraction=records,
        inserts=heap.inserts,
        decreases=heap.decreases,
        extractions=heap.extractions,
    )
    logger.info(f"fast-noisy-voronoi done {kv(n=g.n, k=g.k, extractions=heap.extractions)}")
    return ClusteringResult(partition, minor, trace)


def extraction_bound(g: WeightedGraph) -> int:
    """min{2m, n k}: the most heap extractions a whole run can perform."""
    return min(2 * g.m, g.vertex_count * g.k)
