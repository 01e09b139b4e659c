"""
Instrumentation around the clustering algorithms: the greedy interval
partition of a terminal-to-terminal shortest path, and Monte-Carlo estimates
of the expected distortion.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from spr.config import get_settings
from spr.errors import InvalidParameter
from spr.graph_core import (
    WeightedGraph,
    min_terminal_pair_distance,
    shortest_path,
    terminal_distance_matrix,
    terminal_distances,
)
from spr.partition import distortion
from spr.runner import RunOptions, run_algorithm
from spr.sampling import default_delta
from spr.schemas import IntervalRow, TrialPairRow, TrialSummary
from spr.utils_logging import get_logger, kv

DEFAULT_C_INT = 1.0 / 6.0

logger = get_logger(__name__)


@dataclass(frozen=True)
class Interval:
    """Path positions start..end (inclusive) with their lengths.

    ``L`` runs from start to end, ``L_plus`` from the vertex before start to
    the one after end (clamped to the path), ``D`` is D(v_start).
    """

    start: int
    end: int
    L: float
    L_plus: float
    D: float

    def to_row(self) -> IntervalRow:
        return IntervalRow(start=self.start, end=self.end, L=self.L, L_plus=self.L_plus, D=self.D)


@dataclass(frozen=True)
class IntervalPartition:
    path: Tuple[int, ...]
    intervals: Tuple[Interval, ...]
    c_int: float
    delta: float
    warnings: Tuple[str, ...] = ()

    def target(self, interval: Interval) -> float:
        return self.c_int * self.delta * interval.D

    def satisfies_bounds(self, interval: Interval) -> bool:
        target = self.target(interval)
        return interval.L <= target <= interval.L_plus

    def total_external_length(self) -> float:
        return math.fsum(q.L_plus for q in self.intervals)

    def steiner_external_length(self) -> float:
        """Sum of L+ over the Steiner intervals only.

        The terminal singletons each add their neighboring edges once more, so
        this is the sum over the intervals strictly between t and t'.
        """
        return math.fsum(q.L_plus for q in self.intervals if q.D > 0)


def interval_partition(
    g: WeightedGraph,
    t: int,
    t_prime: int,
    c_int: float = DEFAULT_C_INT,
    delta: Optional[float] = None,
) -> IntervalPartition:
    """Greedy partition of the shortest t - t' path into intervals Q with
    L(Q) <= c_int * delta * D(Q) <= L+(Q).

    Terminals on the path (the endpoints and any interior ones) become
    singleton intervals with D = 0; each run of Steiner vertices between two
    of them is swept with those terminals as the outer neighbors. The endpoint
    singletons cover t and t' themselves, so ``total_external_length``
    counts the two end edges a second time; ``steiner_external_length``
    leaves them out. An interior terminal is reported in ``warnings``, as is
    any path edge heavier than (delta / 24) * min terminal distance.

    Every Steiner vertex can reach an interval end with L+ >= c_int * delta * D
    only when c_int * delta <= 1, so larger products are rejected.
    """
    if not g.is_terminal(t) or not g.is_terminal(t_prime):
        raise InvalidParameter("interval endpoints must be terminals", t=t, t_prime=t_prime)
    if t == t_prime:
        raise InvalidParameter("interval endpoints must differ", t=t)
    if not c_int > 0:
        raise InvalidParameter("c_int must be positive", c_int=c_int)
    delta = default_delta(g.k) if delta is None else delta
    if not delta > 0:
        raise InvalidParameter("delta must be positive", delta=delta)
    if c_int * delta > 1.0:
        raise InvalidParameter("c_int * delta must be at most 1", c_int=c_int, delta=delta)

    path = shortest_path(g, t, t_prime)
    D = terminal_distances(g).dist
    # prefix[i] = length of the path from t to path[i]
    prefix = [0.0]
    for a, b in zip(path, path[1:]):
        prefix.append(prefix[-1] + g.weight(a, b))
    last = len(path) - 1

    warnings: List[str] = []
    c_w = delta / 24.0
    cap = c_w * min_terminal_pair_distance(g)
    heavy = sum(1 for i in range(last) if prefix[i + 1] - prefix[i] > cap)
    if heavy:
        warnings.append(f"{heavy} path edges exceed c_w * min terminal distance ({cap:.6g})")
    interior = [v for v in path[1:-1] if g.is_terminal(v)]
    if interior:
        warnings.append(f"IntermediateTerminalOnPath: {interior}")

    def external(a: int, b: int) -> float:
        return prefix[min(b + 1, last)] - prefix[max(a - 1, 0)]

    intervals: List[Interval] = []
    h = 0
    while h <= last:
        if g.is_terminal(path[h]):
            intervals.append(Interval(h, h, 0.0, external(h, h), 0.0))
            h += 1
            continue
        # the run of Steiner vertices ends just before the next terminal
        stop = h
        while not g.is_terminal(path[stop + 1]):
            stop += 1
        d_h = float(D[path[h]])
        target = c_int * delta * d_h
        end = h
        while end < stop and external(h, end) < target:
            end += 1
        intervals.append(Interval(h, end, prefix[end] - prefix[h], external(h, end), d_h))
        h = end + 1

    for message in warnings:
        logger.warning(f"interval partition {kv(t=t, t_prime=t_prime)}: {message}")
    return IntervalPartition(
        path=tuple(path),
        intervals=tuple(intervals),
        c_int=c_int,
        delta=delta,
        warnings=tuple(warnings),
    )


@dataclass(frozen=True)
class ExpectedDistortionEstimate:
    algorithm: str
    seed: int
    trials: int
    mean: np.ndarray
    stderr: np.ndarray
    minimum: np.ndarray
    maximum: np.ndarray
    worst: np.ndarray
    max_mean: float
    argmax_pair: Tuple[int, int]

    @property
    def max_mean_stderr(self) -> float:
        i, j = self.argmax_pair
        return float(self.stderr[i, j])

    @property
    def mean_worst(self) -> float:
        return float(self.worst.mean())

    def pair_rows(self) -> List[TrialPairRow]:
        k = self.mean.shape[0]
        rows = []
        for i in range(k):
            for j in range(i + 1, k):
                rows.append(
                    TrialPairRow(
                        i=i,
                        j=j,
                        mean=float(self.mean[i, j]),
                        stderr=float(self.stderr[i, j]),
                        min=float(self.minimum[i, j]),
                        max=float(self.maximum[i, j]),
                    )
                )
        return rows

    def summary(self) -> TrialSummary:
        return TrialSummary(
            algorithm=self.algorithm,
            trials=self.trials,
            seed=self.seed,
            max_mean=self.max_mean,
            stderr=self.max_mean_stderr,
            argmax_pair=self.argmax_pair,
            mean_worst=self.mean_worst,
        )


def expected_distortion(
    g: WeightedGraph,
    algorithm: str,
    trials: int,
    seed: int = 0,
    options: Optional[RunOptions] = None,
    threads: Optional[int] = None,
) -> ExpectedDistortionEstimate:
    """Run ``algorithm`` with seeds seed..seed+trials-1 and average the
    per-pair ratios.

    Trials run on a thread pool but are folded in seed order, so the
    estimate does not depend on which trial finishes first.
    """
    if trials < 1:
        raise InvalidParameter("trials must be at least 1", trials=trials)
    threads = threads or get_settings().threads
    dg = terminal_distance_matrix(g)
    k = g.k

    def one(trial_seed: int) -> Tuple[np.ndarray, float]:
        result = run_algorithm(g, algorithm, trial_seed, options)
        report = distortion(g, result.minor, dg)
        return report.per_pair, report.worst

    # Welford running mean and squared deviations
    mean = np.zeros((k, k), dtype=np.float64)
    m2 = np.zeros((k, k), dtype=np.float64)
    minimum = np.full((k, k), np.inf)
    maximum = np.full((k, k), -np.inf)
    worst = np.empty(trials, dtype=np.float64)
    seeds = range(seed, seed + trials)
    workers = max(1, min(threads, trials))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for count, (ratios, trial_worst) in enumerate(pool.map(one, seeds), start=1):
            delta = ratios - mean
            mean += delta / count
            m2 += delta * (ratios - mean)
            np.minimum(minimum, ratios, out=minimum)
            np.maximum(maximum, ratios, out=maximum)
            worst[count - 1] = trial_worst
            logger.debug(f"trial {kv(algorithm=algorithm, seed=seed + count - 1, worst=trial_worst)}")

    if trials > 1:
        stderr = np.sqrt(m2 / (trials - 1) / trials)
    else:
        stderr = np.zeros((k, k), dtype=np.float64)
    if k >= 2:
        rows, cols = np.triu_indices(k, 1)
        best = int(np.argmax(mean[rows, cols]))
        argmax = (int(rows[best]), int(cols[best]))
        max_mean = float(mean[argmax])
    else:
        argmax, max_mean = (0, 0), 1.0
    logger.info(f"trials done {kv(algorithm=algorithm, trials=trials, max_mean=max_mean, workers=workers)}")
    return ExpectedDistortionEstimate(
        algorithm=algorithm,
        seed=seed,
        trials=trials,
        mean=mean,
        stderr=stderr,
        minimum=minimum,
        maximum=maximum,
        worst=worst,
        max_mean=max_mean,
        argmax_pair=argmax,
    )


def caterpillar_voronoi_distortion(k: int, epsilon: float) -> float:
    """(k-1)(2+eps) / (2+(k-1) eps): the Voronoi minor's ratio at (t_1, t_k)."""
    return (k - 1) * (2.0 + epsilon) / (2.0 + (k - 1) * epsilon)


def caterpillar_max_distortion(k: int, epsilon: float) -> float:
    """Largest ratio any terminal partition of the caterpillar can produce.

    Every minor edge costs at least 2+eps, and the ratio is maximized when the
    minor is the path t_1 - ... - t_k, which is the Voronoi minor.
    """
    return caterpillar_voronoi_distortion(k, epsilon)


def empirical_tail(samples: np.ndarray, a: float) -> Tuple[float, float]:
    """Fraction of samples >= a and its binomial standard error."""
    hits = float(np.count_nonzero(samples >= a)) / len(samples)
    return hits, math.sqrt(max(hits * (1.0 - hits), 0.0) / len(samples))
