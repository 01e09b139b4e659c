"""
Ball-Growing baseline.

Rounds l = 0, 1, ... of k steps: terminal j adds q ~ Exp(D r^l) to its radius
R_j and takes the ball of radius R_j around t_j in the graph induced by the
unclustered vertices plus its own cluster. Runs until every vertex is taken.
"""

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from spr.errors import InvalidParameter, InvariantViolation, NoSteinerVertices, RoundLimitExceeded
from spr.graph_core import WeightedGraph, ball, terminal_distances, terminal_row
from spr.noisy_voronoi import ClusteringResult, ClusteringTrace, trivial_result
from spr.partition import TerminalPartition, WeightMode, induce_minor
from spr.sampling import BALL_STREAM, ball_growing_rates, make_rng, sample_exponential
from spr.schemas import BallStepRecord
from spr.utils_logging import get_logger, kv

DEFAULT_DELTA = 0.05


class BallGrowingConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    delta: float = Field(default=DEFAULT_DELTA, gt=0)
    seed: int = Field(default=0, ge=0, lt=2**64)
    normalize: bool = True
    # draws[l][j] replaces the sampled increment of terminal j in round l
    draws: Optional[Tuple[Tuple[float, ...], ...]] = None
    max_rounds: Optional[int] = Field(default=None, ge=1)

    @field_validator("draws")
    @classmethod
    def _non_negative(cls, v):
        if v is not None and any(q < 0 for row in v for q in row):
            raise ValueError("pinned increments must be non-negative")
        return v

    def rates(self, k: int) -> Tuple[float, float]:
        """(r, D) for k terminals."""
        return ball_growing_rates(k, self.delta)


@dataclass
class RadiiState:
    radii: np.ndarray
    round: int = 0


@dataclass(frozen=True)
class BallGrowingTrace(ClusteringTrace):
    scale: float = 1.0
    increments: Tuple[np.ndarray, ...] = ()
    radii: Tuple[np.ndarray, ...] = ()
    claimed: Tuple[np.ndarray, ...] = ()
    final: Optional[RadiiState] = field(default=None, compare=False)

    @property
    def rounds_run(self) -> int:
        return len(self.radii)

    def records(self) -> List[BallStepRecord]:
        out = []
        for round_index, (q, radius, claimed) in enumerate(zip(self.increments, self.radii, self.claimed)):
            for j in range(len(q)):
                out.append(
                    BallStepRecord(
                        round=round_index,
                        terminal=j,
                        draw=float(q[j]),
                        radius=float(radius[j]),
                        claimed=int(claimed[j]),
                    )
                )
        return out


class _OwnOrFree:
    """Membership test for V_free + V_j over an owner array."""

    __slots__ = ("owner", "index")

    def __init__(self, owner: List[int], index: int):
        self.owner = owner
        self.index = index

    def __contains__(self, v: int) -> bool:
        o = self.owner[v]
        return o == -1 or o == self.index


def normalize_instance(g: WeightedGraph) -> Tuple[WeightedGraph, float]:
    """Scale weights so the closest terminal / Steiner pair is at distance 1.

    Returns the scaled graph and the factor applied; the graph is returned
    as is when the factor is exactly 1.
    """
    steiner = g.steiner_vertices
    if not steiner:
        raise NoSteinerVertices("normalization needs a Steiner vertex", n=g.n, k=g.k)
    D = terminal_distances(g).dist
    closest = float(D[list(steiner)].min())
    factor = 1.0 / closest
    if factor == 1.0:
        return g, 1.0
    return g.scaled(factor), factor


def round_limit(g: WeightedGraph, r: float) -> int:
    """10 * ceil(log_r(diameter + 1)) + 100, with twice one terminal's
    eccentricity standing in for the diameter."""
    row = terminal_row(g, 0)
    diameter = 2.0 * float(np.max(row))
    return 10 * math.ceil(math.log(max(diameter, 1.0) + 1.0) / math.log(r)) + 100


def _round_increments(config: BallGrowingConfig, round_index: int, k: int, scale: float) -> np.ndarray:
    if config.draws is not None and round_index < len(config.draws):
        row = config.draws[round_index]
        if len(row) != k:
            raise InvalidParameter("pinned round must list one increment per terminal", round=round_index, k=k)
        return np.asarray(row, dtype=np.float64)
    return sample_exponential(scale, make_rng(config.seed, BALL_STREAM, round_index), size=k)


def ball_growing(g: WeightedGraph, config: Optional[BallGrowingConfig] = None) -> ClusteringResult:
    config = config or BallGrowingConfig()
    if g.k < 2:
        return trivial_result(g, "ball", WeightMode.GLOBAL, config.seed)
    logger = get_logger(__name__, seed=config.seed)
    work, factor = g, 1.0
    if config.normalize:
        try:
            work, factor = normalize_instance(g)
        except NoSteinerVertices:
            logger.info("no Steiner vertices; running without normalization")

    k = g.k
    r, base = config.rates(k)
    limit = config.max_rounds if config.max_rounds is not None else round_limit(work, r)
    owner = [-1] * work.vertex_count
    for index, t in enumerate(work.terminals):
        owner[t] = index
    free = work.vertex_count - k
    state = RadiiState(radii=np.zeros(k, dtype=np.float64))
    # no ball can change before its radius reaches this distance
    threshold = np.zeros(k, dtype=np.float64)
    increments: List[np.ndarray] = []
    radii: List[np.ndarray] = []
    claimed: List[np.ndarray] = []

    while free > 0:
        if state.round >= limit:
            raise RoundLimitExceeded(
                "ball growing did not finish", rounds=state.round, unclustered=free, seed=config.seed
            )
        q = _round_increments(config, state.round, k, base * r ** state.round)
        state.radii += q
        taken = np.zeros(k, dtype=np.int64)
        for j in np.nonzero(state.radii >= threshold)[0].tolist():
            dist, beyond = ball(work, work.terminals[j], float(state.radii[j]), within=_OwnOrFree(owner, j))
            count = 0
            for v in dist:
                if owner[v] == -1:
                    owner[v] = j
                    count += 1
            free -= count
            taken[j] = count
            threshold[j] = beyond
            if free == 0:
                break
        increments.append(q)
        radii.append(state.radii.copy())
        claimed.append(taken)
        logger.debug(f"round {kv(round=state.round, claimed=int(taken.sum()), free=free)}")
        state.round += 1

    if any(o < 0 for o in owner):
        raise InvariantViolation("vertices left unclustered", seed=config.seed)
    partition = TerminalPartition.from_assignment(owner, k)
    minor = induce_minor(g, partition, WeightMode.GLOBAL)
    trace = BallGrowingTrace(
        algorithm="ball",
        seed=config.seed,
        scale=factor,
        increments=tuple(increments),
        radii=tuple(radii),
        claimed=tuple(claimed),
        final=state,
    )
    logger.info(f"ball-growing done {kv(n=g.n, k=k, rounds=state.round, scale=factor)}")
    return ClusteringResult(partition, minor, trace)

