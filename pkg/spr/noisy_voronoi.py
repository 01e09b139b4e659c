"""
Reference Noisy-Voronoi clustering and the plain Voronoi baseline.

Each terminal in turn grows a cluster out of the still unclustered Steiner
vertices, admitting v when d_G(v, t_j) <= R_j * D(v) with R_j = (1+delta)^g_j.
Distances are always taken in the full graph; only the growth is restricted.
"""

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Collection, Deque, List, NamedTuple, Optional, Sequence, Set, Tuple

import numpy as np

from spr.errors import InvariantViolation
from spr.graph_core import WeightedGraph, terminal_distances, terminal_row
from spr.partition import InducedMinor, TerminalPartition, WeightMode, induce_minor
from spr.sampling import RandomPlan, magnitude
from spr.schemas import RoundRecord
from spr.utils_logging import get_logger, kv


class FrontierPolicy(str, Enum):
    FIFO = "fifo"
    LIFO = "lifo"


@dataclass
class ClusterState:
    terminal: int
    magnitude: float
    cluster: Set[int]
    denied: Set[int] = field(default_factory=set)
    frontier: Deque[int] = field(default_factory=deque)
    frontier_peak: int = 0


@dataclass(frozen=True)
class RoundTrace:
    terminal: int
    g: Optional[int]
    R: float
    cluster_size: int
    frontier_peak: int
    inserts: Optional[int] = None
    decreases: Optional[int] = None
    extractions: Optional[int] = None

    def to_record(self) -> RoundRecord:
        return RoundRecord(
            terminal=self.terminal,
            g=self.g,
            R=self.R,
            cluster_size=self.cluster_size,
            frontier_peak=self.frontier_peak,
            inserts=self.inserts,
            decreases=self.decreases,
            extractions=self.extractions,
        )


@dataclass(frozen=True)
class ClusteringTrace:
    algorithm: str
    seed: Optional[int]
    rounds: Tuple[RoundTrace, ...] = ()

    def records(self) -> List[RoundRecord]:
        return [r.to_record() for r in self.rounds]


class ClusteringResult(NamedTuple):
    partition: TerminalPartition
    minor: InducedMinor
    trace: object


def grow_cluster(
    g: WeightedGraph,
    unclustered: Collection[int],
    t_j: int,
    R_j: float,
    D: Sequence[float],
    d_tj: Sequence[float],
    frontier_policy: FrontierPolicy = FrontierPolicy.FIFO,
) -> ClusterState:
    """Create-Cluster with its bookkeeping exposed (denied set, frontier peak)."""
    policy = FrontierPolicy(frontier_policy)
    state = ClusterState(terminal=t_j, magnitude=R_j, cluster={t_j})
    cluster, denied, frontier = state.cluster, state.denied, state.frontier
    # every vertex that ever entered the frontier; it is never queued twice
    queued = {t_j}
    adjacency = g.adjacency

    def enqueue(v: int) -> None:
        for u, _, _ in adjacency[v]:
            if u not in queued and u in unclustered:
                queued.add(u)
                frontier.append(u)

    enqueue(t_j)
    take = frontier.popleft if policy is FrontierPolicy.FIFO else frontier.pop
    peak = len(frontier)
    while frontier:
        v = take()
        if d_tj[v] <= R_j * D[v]:
            cluster.add(v)
            enqueue(v)
            if len(frontier) > peak:
                peak = len(frontier)
        else:
            denied.add(v)
    state.frontier_peak = peak
    return state


def create_cluster(
    g: WeightedGraph,
    unclustered: Collection[int],
    t_j: int,
    R_j: float,
    D: Sequence[float],
    d_tj: Sequence[float],
    frontier_policy: FrontierPolicy = FrontierPolicy.FIFO,
) -> frozenset:
    return frozenset(grow_cluster(g, unclustered, t_j, R_j, D, d_tj, frontier_policy).cluster)


def trivial_result(g: WeightedGraph, algorithm: str, mode: WeightMode, seed: Optional[int] = None) -> ClusteringResult:
    """A single terminal owns every vertex; the minor is one vertex."""
    partition = TerminalPartition(assignment=(0,) * g.vertex_count, k=1)
    minor = InducedMinor(terminals=g.terminals, edges=(), weight_mode=mode)
    return ClusteringResult(partition, minor, ClusteringTrace(algorithm=algorithm, seed=seed))


def noisy_voronoi(
    g: WeightedGraph,
    plan: Optional[RandomPlan] = None,
    frontier_policy: FrontierPolicy = FrontierPolicy.FIFO,
) -> ClusteringResult:
    plan = plan or RandomPlan()
    if g.k < 2:
        return trivial_result(g, "noisy", WeightMode.GLOBAL, plan.seed)
    logger = get_logger(__name__, seed=plan.seed)
    delta = plan.resolved_delta(g.k)
    draws = plan.draws_for(g.k)
    D = terminal_distances(g).dist

    unclustered = set(g.steiner_vertices)
    assignment = np.full(g.vertex_count, -1, dtype=np.int64)
    assignment[list(g.terminals)] = np.arange(g.k)
    rounds: List[RoundTrace] = []
    for j in plan.terminal_order(g.k):
        R = magnitude(draws[j], delta)
        state = grow_cluster(g, unclustered, g.terminals[j], R, D, terminal_row(g, j), frontier_policy)
        members = state.cluster
        members.discard(g.terminals[j])
        unclustered.difference_update(members)
        assignment[list(members)] = j
        rounds.append(RoundTrace(j, draws[j], R, len(members) + 1, state.frontier_peak))
        logger.debug(f"round {kv(j=j, g=draws[j], R=R, size=len(members) + 1, peak=state.frontier_peak)}")

    if unclustered:
        raise InvariantViolation("vertices left unclustered", count=len(unclustered), seed=plan.seed)
    partition = TerminalPartition.from_assignment(assignment.tolist(), g.k)
    minor = induce_minor(g, partition, WeightMode.GLOBAL)
    logger.info(f"noisy-voronoi done {kv(n=g.n, k=g.k, minor_edges=len(minor.edges))}")
    return ClusteringResult(partition, minor, ClusteringTrace("noisy", plan.seed, tuple(rounds)))


def plain_voronoi(g: WeightedGraph) -> TerminalPartition:
    """Every vertex joins its nearest terminal, ties to the smaller index."""
    origin = terminal_distances(g).origin
    return TerminalPartition.from_assignment(origin.tolist(), g.k)


def voronoi_clustering(g: WeightedGraph) -> ClusteringResult:
    partition = plain_voronoi(g)
    minor = induce_minor(g, partition, WeightMode.GLOBAL)
    return ClusteringResult(partition, minor, ClusteringTrace("voronoi", None))
