"""
Seeded randomness and the closed-form tail bounds used to check it.

Every random quantity is derived from one 64-bit seed through numpy's
``SeedSequence`` with a fixed ``spawn_key`` per consumer:

    (0, j)  geometric draw g_j of terminal index j
    (1,)    terminal processing order (when shuffled)
    (2, l)  ball-growing draws of round l, one per terminal

so a draw never depends on how many other draws were taken before it.
"""

import math
from typing import List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from spr.errors import FewerThanTwoTerminals, InvalidParameter, InvalidProbability, PreconditionViolated

DEFAULT_P = 0.2

GEOMETRIC_STREAM = 0
ORDER_STREAM = 1
BALL_STREAM = 2

ArrayOrScalar = Union[float, np.ndarray]


def make_rng(seed: int, *spawn_key: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=spawn_key)))


def default_delta(k: int) -> float:
    """delta = 1 / (20 ln k); undefined below two terminals."""
    if k < 2:
        raise FewerThanTwoTerminals("delta = 1/(20 ln k) needs k >= 2", k=k)
    return 1.0 / (20.0 * math.log(k))


def _check_probability(p: float) -> None:
    if not 0.0 < p < 1.0:
        raise InvalidProbability("p must lie strictly between 0 and 1", p=p)


def _check_scale(lam: float) -> None:
    if not lam > 0 or not math.isfinite(lam):
        raise InvalidParameter("exponential mean must be positive and finite", lam=lam)


def geometric_from_uniform(u: ArrayOrScalar, p: float) -> ArrayOrScalar:
    """Inverse CDF of Geo(p): ceil(ln(1-u) / ln(1-p)), at least 1."""
    _check_probability(p)
    g = np.ceil(np.log1p(-np.asarray(u, dtype=np.float64)) / math.log1p(-p))
    g = np.maximum(g, 1).astype(np.int64)
    return int(g) if g.ndim == 0 else g


def exponential_from_uniform(u: ArrayOrScalar, lam: float) -> ArrayOrScalar:
    """Inverse CDF of Exp(lam): -lam * ln(1-u)."""
    _check_scale(lam)
    x = -lam * np.log1p(-np.asarray(u, dtype=np.float64))
    return float(x) if x.ndim == 0 else x


def sample_geometric(p: float, rng: np.random.Generator, size: Optional[int] = None) -> ArrayOrScalar:
    _check_probability(p)
    return geometric_from_uniform(rng.random(size), p)


def sample_exponential(lam: float, rng: np.random.Generator, size: Optional[int] = None) -> ArrayOrScalar:
    _check_scale(lam)
    return exponential_from_uniform(rng.random(size), lam)


def magnitude(g: int, delta: float) -> float:
    """R = (1 + delta) ** g."""
    if int(g) != g or g < 1:
        raise InvalidParameter("geometric draw must be an integer >= 1", g=g)
    if not delta > 0:
        raise InvalidParameter("delta must be positive", delta=delta)
    return (1.0 + delta) ** int(g)


def magnitude_exceed_probability(threshold: float, p: float, delta: float) -> float:
    """Pr[(1 + delta) ** g >= threshold] for g ~ Geo(p)."""
    _check_probability(p)
    if not delta > 0:
        raise InvalidParameter("delta must be positive", delta=delta)
    if threshold <= 1.0 + delta:
        return 1.0
    # smallest integer s with (1 + delta) ** s >= threshold
    s = math.ceil(math.log(threshold) / math.log1p(delta))
    while (1.0 + delta) ** (s - 1) >= threshold:
        s -= 1
    while (1.0 + delta) ** s < threshold:
        s += 1
    return (1.0 - p) ** (s - 1)


class RandomPlan(BaseModel):
    """Seed and parameters of one Noisy-Voronoi run.

    ``draws`` pins g_0..g_{k-1}; when absent each g_j comes from the stream of
    terminal j so that pinned and sampled runs stay comparable.
    """

    model_config = ConfigDict(frozen=True)

    seed: int = Field(default=0, ge=0, lt=2**64)
    p: float = DEFAULT_P
    delta: Optional[float] = None
    draws: Optional[Tuple[int, ...]] = None
    shuffle_terminals: bool = False

    @field_validator("p")
    @classmethod
    def _p_in_range(cls, v: float) -> float:
        if not 0.0 < v < 1.0:
            raise ValueError("p must lie strictly between 0 and 1")
        return v

    @field_validator("delta")
    @classmethod
    def _delta_positive(cls, v: Optional[float]) -> Optional[float]:
        if v is not None and not v > 0:
            raise ValueError("delta must be positive")
        return v

    @field_validator("draws")
    @classmethod
    def _draws_at_least_one(cls, v: Optional[Tuple[int, ...]]) -> Optional[Tuple[int, ...]]:
        if v is not None and any(g < 1 for g in v):
            raise ValueError("pinned draws must all be >= 1")
        return v

    def resolved_delta(self, k: int) -> float:
        return self.delta if self.delta is not None else default_delta(k)

    def terminal_rng(self, j: int) -> np.random.Generator:
        return make_rng(self.seed, GEOMETRIC_STREAM, j)

    def order_rng(self) -> np.random.Generator:
        return make_rng(self.seed, ORDER_STREAM)

    def draw(self, j: int) -> int:
        if self.draws is not None:
            return self.draws[j]
        return sample_geometric(self.p, self.terminal_rng(j))

    def draws_for(self, k: int) -> List[int]:
        if self.draws is not None and len(self.draws) != k:
            raise InvalidParameter("pinned draws must list one value per terminal", draws=len(self.draws), k=k)
        return [self.draw(j) for j in range(k)]

    def terminal_order(self, k: int) -> List[int]:
        if not self.shuffle_terminals:
            return list(range(k))
        return [int(j) for j in self.order_rng().permutation(k)]


class TailBoundParams(BaseModel):
    """Parameters of a sum of independent Exp(lambda_i) variables."""

    model_config = ConfigDict(frozen=True)

    lambdas: Tuple[float, ...] = Field(min_length=1)
    alpha: float = Field(default=0.0, ge=0.0)
    t: Optional[float] = None

    @field_validator("lambdas")
    @classmethod
    def _positive(cls, v: Tuple[float, ...]) -> Tuple[float, ...]:
        if any(not lam > 0 for lam in v):
            raise ValueError("every lambda must be positive")
        return v

    @classmethod
    def iid(cls, n: int, lam: float, **kwargs) -> "TailBoundParams":
        return cls(lambdas=(lam,) * n, **kwargs)

    @property
    def lambda_max(self) -> float:
        return max(self.lambdas)

    @property
    def mu(self) -> float:
        return math.fsum(self.lambdas)


class TailBounds(NamedTuple):
    upper: Optional[float]
    lower: Optional[float]
    corollary_upper: Optional[float]
    corollary_lower: Optional[float]


def exp_sum_tail_upper(params: TailBoundParams, a: float) -> float:
    """Pr[X >= a] <= exp(-(a - 2 mu) / (2 lambda_M)) for a >= 2 mu."""
    mu = params.mu
    if a < 2.0 * mu:
        raise PreconditionViolated("bound needs a >= 2 mu", a=a, mu=mu)
    return math.exp(-(a - 2.0 * mu) / (2.0 * params.lambda_max))


def exp_sum_tail_general(params: TailBoundParams) -> TailBounds:
    """Upper and lower tail bounds at (1 +/- alpha) mu.

    The two general bounds use ``params.t`` (default 1 / (2 lambda_M)); the
    upper one is None when alpha < 2 t lambda_M. The corollary forms pick
    their own t (alpha / (4 lambda_M) and alpha / (2 lambda_M)) and are None
    outside alpha <= 2 (upper) and alpha <= 1 (lower).
    """
    lam_m, mu, alpha = params.lambda_max, params.mu, params.alpha
    t = params.t if params.t is not None else 1.0 / (2.0 * lam_m)
    if not 0.0 < t <= 1.0 / (2.0 * lam_m):
        raise PreconditionViolated("t must satisfy 0 < t <= 1/(2 lambda_M)", t=t, lambda_max=lam_m)

    upper = math.exp(-t * mu * (alpha - 2.0 * t * lam_m)) if alpha >= 2.0 * t * lam_m else None
    lower = math.exp(-t * mu * (alpha - t * lam_m))
    corollary_upper = math.exp(-alpha * alpha * mu / (8.0 * lam_m)) if alpha <= 2.0 else None
    corollary_lower = math.exp(-alpha * alpha * mu / (4.0 * lam_m)) if alpha <= 1.0 else None
    return TailBounds(upper, lower, corollary_upper, corollary_lower)


class RadiusMoments(NamedTuple):
    mean: float
    variance: float


def ball_growing_rates(k: int, delta: float = 0.05) -> Tuple[float, float]:
    """(r, D) = (1 + delta / ln k, delta / ln k)."""
    if k < 2:
        raise FewerThanTwoTerminals("ball growing needs k >= 2", k=k)
    if not delta > 0:
        raise InvalidParameter("delta must be positive", delta=delta)
    base = delta / math.log(k)
    return 1.0 + base, base


def ball_radius_moments(k: int, rounds: float, delta: float = 0.05) -> RadiusMoments:
    """Mean and variance of a radius after rounds 0..rounds.

    The radius is a sum of independent Exp(D r^l) increments, so the mean is
    D (r^(m+1) - 1) / (r - 1) and the variance D^2 (r^(2(m+1)) - 1) / (r^2 - 1).
    ``rounds`` may be fractional to evaluate the closed form at m = log_r 3 - 1.
    """
    r, base = ball_growing_rates(k, delta)
    mean = base * (r ** (rounds + 1) - 1.0) / (r - 1.0)
    variance = base * base * (r ** (2 * (rounds + 1)) - 1.0) / (r * r - 1.0)
    return RadiusMoments(mean, variance)


def rounds_to_mean_radius(k: int, target: float, delta: float = 0.05) -> float:
    """m with ball_radius_moments(k, m).mean == target: log_r(1 + target * (r-1)/D) - 1."""
    r, base = ball_growing_rates(k, delta)
    return math.log(1.0 + target * (r - 1.0) / base) / math.log(r) - 1.0


def exp_sum_samples(lambdas: Sequence[float], trials: int, rng: np.random.Generator, chunk: int = 100_000) -> np.ndarray:
    """Monte-Carlo draws of sum_i Exp(lambda_i), generated in chunks of trials."""
    scales = np.asarray(lambdas, dtype=np.float64)
    out = np.empty(trials, dtype=np.float64)
    for start in range(0, trials, chunk):
        stop = min(trials, start + chunk)
        block = rng.exponential(scale=scales, size=(stop - start, len(scales)))
        out[start:stop] = block.sum(axis=1)
    return out
