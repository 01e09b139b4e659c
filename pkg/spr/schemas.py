from pydantic import BaseModel, Field
from typing import List, Literal, Optional, Tuple

# Every record is written as one JSON object per line; ``record`` names the
# kind so mixed streams (minor + trace) can be filtered with jq or grep.


# Minor schemas
class MinorEdgeRecord(BaseModel):
    i: int = Field(ge=0)
    j: int = Field(ge=0)
    w: float = Field(gt=0)


class MinorRecord(BaseModel):
    record: Literal["minor"] = "minor"
    algorithm: str
    seed: Optional[int] = None
    weight_mode: Literal["global", "single_crossing"]
    terminals: List[int]
    edges: List[MinorEdgeRecord]
    distortion_worst: Optional[float] = None
    argmax_pair: Optional[Tuple[int, int]] = None
    scale: float = 1.0


class DistortionRecord(BaseModel):
    record: Literal["distortion"] = "distortion"
    algorithm: Optional[str] = None
    seed: Optional[int] = None
    worst: float
    argmax_pair: Tuple[int, int]
    minor_edges: int


# Trace schemas
class RoundRecord(BaseModel):
    record: Literal["round"] = "round"
    terminal: int
    g: Optional[int] = None
    R: float
    cluster_size: int
    frontier_peak: int
    inserts: Optional[int] = None
    decreases: Optional[int] = None
    extractions: Optional[int] = None


class BallStepRecord(BaseModel):
    record: Literal["ball_step"] = "ball_step"
    round: int
    terminal: int
    draw: float
    radius: float
    claimed: int


# Table schemas
class TrialPairRow(BaseModel):
    record: Literal["trial_pair"] = "trial_pair"
    i: int
    j: int
    mean: float
    stderr: float
    min: float
    max: float


class TrialSummary(BaseModel):
    record: Literal["trial_summary"] = "trial_summary"
    algorithm: str
    trials: int
    seed: int
    max_mean: float
    stderr: float
    argmax_pair: Tuple[int, int]
    mean_worst: float


class BenchRow(BaseModel):
    record: Literal["bench"] = "bench"
    algorithm: str
    n: int
    m: int
    k: int
    seconds: float
    ratio: Optional[float] = None
    inserts: Optional[int] = None
    decreases: Optional[int] = None
    extractions: Optional[int] = None
    extraction_bound: Optional[int] = None
    slow_seconds: Optional[float] = None


class IntervalRow(BaseModel):
    record: Literal["interval"] = "interval"
    start: int
    end: int
    L: float
    L_plus: float
    D: float
