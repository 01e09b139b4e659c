from typing import Dict, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from spr.ball_growing import DEFAULT_DELTA, BallGrowingConfig, ball_growing
from spr.errors import UnknownAlgorithm
from spr.fast_voronoi import fast_noisy_voronoi
from spr.graph_core import WeightedGraph
from spr.noisy_voronoi import ClusteringResult, FrontierPolicy, noisy_voronoi, voronoi_clustering
from spr.sampling import DEFAULT_P, RandomPlan

ALGORITHMS = ("noisy", "fast", "ball", "voronoi")


class RunOptions(BaseModel):
    """Everything a run needs besides the graph and the seed."""

    model_config = ConfigDict(frozen=True)

    p: float = Field(default=DEFAULT_P, gt=0, lt=1)
    delta: Optional[float] = Field(default=None, gt=0)
    draws: Optional[Tuple[int, ...]] = None
    shuffle_terminals: bool = False
    frontier_policy: FrontierPolicy = FrontierPolicy.FIFO
    ball_delta: float = Field(default=DEFAULT_DELTA, gt=0)
    normalize: bool = True

    def plan(self, seed: int) -> RandomPlan:
        return RandomPlan(
            seed=seed,
            p=self.p,
            delta=self.delta,
            draws=self.draws,
            shuffle_terminals=self.shuffle_terminals,
        )

    def ball_config(self, seed: int) -> BallGrowingConfig:
        return BallGrowingConfig(delta=self.ball_delta, seed=seed, normalize=self.normalize)


def run_algorithm(
    g: WeightedGraph,
    algorithm: str,
    seed: int = 0,
    options: Optional[RunOptions] = None,
) -> ClusteringResult:
    options = options or RunOptions()
    if algorithm == "noisy":
        return noisy_voronoi(g, options.plan(seed), options.frontier_policy)
    if algorithm == "fast":
        return fast_noisy_voronoi(g, options.plan(seed))
    if algorithm == "ball":
        return ball_growing(g, options.ball_config(seed))
    if algorithm == "voronoi":
        return voronoi_clustering(g)
    raise UnknownAlgorithm(f"unknown algorithm '{algorithm}'", choices=",".join(ALGORITHMS))


def describe() -> Dict[str, str]:
    return {
        "noisy": "Noisy-Voronoi reference (global minor weights)",
        "fast": "Fast Noisy-Voronoi (single-crossing minor weights)",
        "ball": "Ball-Growing with exponential radius increments",
        "voronoi": "plain Voronoi cells",
    }
