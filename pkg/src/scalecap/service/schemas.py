"""Request and response bodies for the HTTP service.

The CLI builds these same models and calls the route handlers in
process, so every field here is also the contract for CLI output.
"""

from __future__ import annotations

from typing import Literal, Optional, Union

from pydantic import BaseModel, Field

from ..simulate import DEFAULT_BATCHES, DEFAULT_MEASURED, DEFAULT_WARMUP


class HealthOut(BaseModel):
    status: Literal["ok"]
    version: str


class PointIn(BaseModel):
    p: int = Field(ge=1)
    throughput: float = Field(gt=0)


class FitRequest(BaseModel):
    points: list[PointIn] = Field(min_length=1)
    model: Literal["amdahl", "mpf", "usl", "all"] = "all"
    baseline: Optional[float] = Field(default=None, gt=0)
    extrapolate: list[int] = Field(default_factory=list)
    label: str = "series"


class AsymptoteOut(BaseModel):
    value: Optional[float]
    unbounded: bool
    peak_p: Optional[int] = None
    peak_capacity: Optional[float] = None


class PointFitOut(BaseModel):
    p: int
    measured: float
    fitted: float


class PredictionOut(BaseModel):
    p: int
    capacity: float


class FitOut(BaseModel):
    model: str
    params: dict[str, float]
    sse: float
    r2: float
    asymptote: AsymptoteOut
    points: list[PointFitOut]
    clamped: list[str]
    baseline_x1: Optional[float]
    predictions: list[PredictionOut]


class SkippedOut(BaseModel):
    model: str
    reason: str


class DivergenceOut(BaseModel):
    p: int
    amdahl: float
    mpf: float
    difference: float


class CompareOut(BaseModel):
    models: list[FitOut]
    skipped: list[SkippedOut]
    divergence: list[DivergenceOut]


class CurvesRequest(BaseModel):
    sigma: Optional[float] = Field(default=None, ge=0, le=1)
    phi: Optional[float] = Field(default=None, gt=0, le=1)
    alpha: Optional[float] = Field(default=None, ge=0)
    beta: Optional[float] = Field(default=None, ge=0)
    matching: Literal["none", "asymptotic", "leading"] = "none"
    p_max: int = Field(default=32, ge=1, le=1_000_000)


class TableOut(BaseModel):
    """Aligned columns of numbers, plus free-form provenance notes."""

    columns: list[str]
    rows: list[list[Union[int, float]]]
    notes: list[str] = Field(default_factory=list)


class RepairmanRequest(BaseModel):
    d: float = Field(gt=0)
    z: float = Field(ge=0)
    p_max: int = Field(default=32, ge=1)
    mode: Literal["exact", "sync", "both"] = "both"


class CoxianRequest(BaseModel):
    mu: float = Field(gt=0)
    phi: float = Field(gt=0, le=1)
    rho: float = Field(gt=0, lt=1)
    p_max: int = Field(default=32, ge=1)


class SimulateRequest(BaseModel):
    scenario: Literal["repairman", "mg1"]
    # repairman scenario
    p: Optional[int] = Field(default=None, ge=1)
    d: Optional[float] = Field(default=None, gt=0)
    z: Optional[float] = Field(default=None, ge=0)
    # mg1 scenario
    rate: Optional[float] = Field(default=None, gt=0)
    mu: Optional[float] = Field(default=None, gt=0)
    phi: Optional[float] = Field(default=None, ge=0, le=1)
    stages: Optional[int] = Field(default=None, ge=1)
    # run controls
    seed: int = Field(default=42, ge=0)
    completions: int = Field(default=DEFAULT_MEASURED, ge=2)
    warmup: int = Field(default=DEFAULT_WARMUP, ge=0)
    batches: int = Field(default=DEFAULT_BATCHES, ge=2)
    repeat: int = Field(default=1, ge=1, le=1000)


class SimRunOut(BaseModel):
    seed: int
    mean: float
    half_width: float
    samples: int
    analytic: float
    inside: bool
    verdict: Literal["PASS", "FAIL"]


class SimulateOut(BaseModel):
    scenario: str
    quantity: Literal["throughput", "response"]
    runs: list[SimRunOut]


class MatchRequest(BaseModel):
    sigma: float
    mode: Literal["asymptotic", "leading"]


class MatchOut(BaseModel):
    mode: str
    sigma: float
    phi: float
    amdahl_asymptote: Optional[float]
    mpf_asymptote: Optional[float]
    amdahl_c2: float
    mpf_c2: float
