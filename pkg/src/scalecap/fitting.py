"""Least-squares estimation of scaling-law parameters.

Measured throughput series are normalized to relative capacity, then
fitted per model:

* Amdahl: the substitution y = p/C - 1, x = p - 1 makes the law linear
  through the origin, so sigma is a one-shot regression slope.
* geometric (MPF): direct search on phi in (0, 1], grid seed plus
  golden-section refinement of the capacity-space error.
* USL: y = p/C - 1 is linear in (p - 1) and p*(p - 1), giving alpha and
  alpha*beta by ordinary least squares.

Reported error (sse, r2) is always computed in capacity space from the
final, possibly clamped, parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .laws import (
    Amdahl,
    Asymptote,
    CapacityPoint,
    Geometric,
    ScalingParams,
    Usl,
    asymptote,
    capacity,
    geometric_capacity,
)

_PARAM_COUNT = {"amdahl": 1, "mpf": 1, "usl": 2}

_PHI_GRID = np.linspace(1e-6, 1.0, 2001)
_PHI_TOL = 1e-10


@dataclass(frozen=True)
class BenchmarkSeries:
    """A measured throughput series: (p, X(p)) pairs in absolute units."""

    label: str
    points: tuple[tuple[int, float], ...]
    units: str = ""

    def __post_init__(self) -> None:
        pts = tuple((int(p), float(x)) for p, x in self.points)
        if not pts:
            raise ValueError("a benchmark series needs at least one point")
        seen = set()
        for p, x in pts:
            if p < 1:
                raise ValueError(f"processor counts must be >= 1, got {p}")
            if p in seen:
                raise ValueError(f"duplicate measurement at p = {p}")
            seen.add(p)
            if not x > 0.0:
                raise ValueError(f"throughput must be > 0, got {x} at p = {p}")
        object.__setattr__(self, "points", tuple(sorted(pts)))


@dataclass(frozen=True)
class PointFit:
    """One measured capacity next to its fitted value."""

    p: int
    measured: float
    fitted: float

    @property
    def residual(self) -> float:
        return self.measured - self.fitted


@dataclass(frozen=True)
class Prediction:
    p: int
    capacity: float


@dataclass(frozen=True)
class FitReport:
    model: str
    params: ScalingParams
    sse: float
    r2: float
    residuals: tuple[PointFit, ...]
    asymptote: Asymptote
    clamped: tuple[str, ...] = ()
    baseline_x1: float | None = None
    predictions: tuple[Prediction, ...] = ()


@dataclass(frozen=True)
class SkippedFit:
    model: str
    reason: str


@dataclass(frozen=True)
class Divergence:
    """Amdahl and MPF capacity forecasts at one extrapolation point."""

    p: int
    amdahl: float
    mpf: float
    difference: float


@dataclass(frozen=True)
class ModelComparison:
    reports: tuple[FitReport, ...]      # ranked, best first
    skipped: tuple[SkippedFit, ...]
    divergence: tuple[Divergence, ...]


def _resolve_baseline(series: BenchmarkSeries, baseline: float | None) -> float:
    if baseline is not None:
        if not baseline > 0.0:
            raise ValueError(f"baseline throughput must be > 0, got {baseline}")
        return float(baseline)
    for p, x in series.points:
        if p == 1:
            return x
    raise ValueError(
        "series has no p = 1 measurement; pass an explicit baseline throughput"
    )


def normalize(
    series: BenchmarkSeries, baseline: float | None = None
) -> list[CapacityPoint]:
    """Scale a throughput series to relative capacity, C(1) = 1.

    The baseline is the measured throughput at p = 1 unless given
    explicitly (required when the series has no p = 1 point).
    """
    x1 = _resolve_baseline(series, baseline)
    return [CapacityPoint(p, x / x1) for p, x in series.points]


def _check_points(points: Sequence[CapacityPoint], minimum: int) -> list[CapacityPoint]:
    pts = sorted(points, key=lambda pt: pt.p)
    if len(pts) < minimum:
        raise ValueError(
            f"underdetermined: need at least {minimum} points, got {len(pts)}"
        )
    for pt in pts:
        if not pt.capacity > 0.0:
            raise ValueError(
                f"capacities must be > 0, got {pt.capacity} at p = {pt.p}"
            )
        if pt.p < 1:
            raise ValueError(f"processor counts must be >= 1, got {pt.p}")
    return pts


def _check_extrapolate(extrapolate: Sequence[int]) -> tuple[int, ...]:
    out = []
    for p in extrapolate:
        if isinstance(p, bool) or not isinstance(p, (int, np.integer)) or p < 1:
            raise ValueError(f"extrapolation points must be integers >= 1, got {p!r}")
        out.append(int(p))
    return tuple(out)


def _report(
    model: str,
    params: ScalingParams,
    pts: Sequence[CapacityPoint],
    extrapolate: tuple[int, ...],
    clamped: tuple[str, ...],
) -> FitReport:
    fitted = [capacity(params, pt.p) for pt in pts]
    residuals = tuple(
        PointFit(pt.p, pt.capacity, f) for pt, f in zip(pts, fitted)
    )
    sse = math.fsum((pt.capacity - f) ** 2 for pt, f in zip(pts, fitted))
    mean_c = math.fsum(pt.capacity for pt in pts) / len(pts)
    sst = math.fsum((pt.capacity - mean_c) ** 2 for pt in pts)
    if sst > 0.0:
        r2 = 1.0 - sse / sst
    else:
        r2 = 1.0 if sse == 0.0 else 0.0
    predictions = tuple(Prediction(p, capacity(params, p)) for p in extrapolate)
    return FitReport(
        model=model,
        params=params,
        sse=sse,
        r2=r2,
        residuals=residuals,
        asymptote=asymptote(params),
        clamped=clamped,
        predictions=predictions,
    )


def fit_amdahl(
    points: Sequence[CapacityPoint], extrapolate: Sequence[int] = ()
) -> FitReport:
    """Estimate the serial fraction by regression through the origin.

    y = p/C - 1 against x = p - 1 gives sigma = sum(x*y) / sum(x*x).
    Estimates outside [0, 1) are clamped and flagged.
    """
    pts = _check_points(points, minimum=2)
    extrapolate = _check_extrapolate(extrapolate)
    sxy = math.fsum((pt.p - 1) * (pt.p / pt.capacity - 1.0) for pt in pts)
    sxx = math.fsum((pt.p - 1) ** 2 for pt in pts)
    if sxx == 0.0:
        raise ValueError("underdetermined: every point is at p = 1")
    sigma = sxy / sxx
    clamped: tuple[str, ...] = ()
    if sigma < 0.0:
        sigma, clamped = 0.0, ("sigma",)
    elif sigma >= 1.0:
        sigma, clamped = math.nextafter(1.0, 0.0), ("sigma",)
    return _report("amdahl", Amdahl(sigma), pts, extrapolate, clamped)


def _golden_min(f, lo: float, hi: float, tol: float) -> float:
    """Golden-section minimum of a unimodal f on [lo, hi]."""
    shrink = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - shrink * (b - a)
    d = a + shrink * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - shrink * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + shrink * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def fit_geometric(
    points: Sequence[CapacityPoint], extrapolate: Sequence[int] = ()
) -> FitReport:
    """Estimate phi by direct search on the capacity-space error.

    A coarse grid over (0, 1] seeds a golden-section refinement; the
    interval endpoints stay candidates so an exactly linear series
    resolves to phi = 1.
    """
    pts = _check_points(points, minimum=2)
    extrapolate = _check_extrapolate(extrapolate)
    if len({pt.p for pt in pts}) < 2:
        raise ValueError("underdetermined: need two distinct processor counts")

    ps = np.array([pt.p for pt in pts], dtype=np.float64)
    cs = np.array([pt.capacity for pt in pts], dtype=np.float64)

    def sse_of(phi: float) -> float:
        return float(
            ((cs - _geometric_capacities(phi, ps)) ** 2).sum()
        )

    grid_sse = (
        (cs[None, :] - _geometric_capacities(_PHI_GRID[:, None], ps[None, :])) ** 2
    ).sum(axis=1)
    i = int(np.argmin(grid_sse))
    lo = _PHI_GRID[max(i - 1, 0)]
    hi = _PHI_GRID[min(i + 1, _PHI_GRID.size - 1)]
    phi = _golden_min(sse_of, float(lo), float(hi), _PHI_TOL)
    # keep the bracket edges in play, they include the phi = 1 boundary
    phi = min((float(lo), float(hi), phi), key=sse_of)
    return _report("mpf", Geometric(phi), pts, extrapolate, ())


def _geometric_capacities(phi, ps):
    """Vectorized (1 - phi**p) / (1 - phi) with the phi = 1 limit."""
    phi = np.asarray(phi, dtype=np.float64)
    den = 1.0 - phi
    safe = np.where(den == 0.0, 1.0, den)
    return np.where(den == 0.0, ps, (1.0 - phi**ps) / safe)


def fit_usl(
    points: Sequence[CapacityPoint], extrapolate: Sequence[int] = ()
) -> FitReport:
    """Estimate alpha and beta by ordinary least squares.

    y = p/C - 1 is linear in x1 = p - 1 and x2 = p*(p - 1) with
    coefficients alpha and alpha*beta.  Negative estimates are clamped
    to zero and flagged.
    """
    pts = _check_points(points, minimum=3)
    extrapolate = _check_extrapolate(extrapolate)
    if len({pt.p for pt in pts}) < 3:
        raise ValueError("underdetermined: need three distinct processor counts")

    ps = np.array([pt.p for pt in pts], dtype=np.float64)
    y = ps / np.array([pt.capacity for pt in pts]) - 1.0
    design = np.column_stack([ps - 1.0, ps * (ps - 1.0)])
    (alpha_raw, gamma_raw), *_ = np.linalg.lstsq(design, y, rcond=None)

    clamped: list[str] = []
    alpha = float(alpha_raw)
    if alpha < 0.0:
        alpha = 0.0
        clamped.append("alpha")
    if alpha > 0.0:
        beta = float(gamma_raw) / alpha
        if beta < 0.0:
            beta = 0.0
            clamped.append("beta")
    else:
        # no contention term, so the coherency coefficient is unusable
        beta = 0.0
        if gamma_raw != 0.0:
            clamped.append("beta")
    return _report("usl", Usl(alpha, beta), pts, extrapolate, tuple(clamped))


def compare_models(
    series: BenchmarkSeries,
    baseline: float | None = None,
    extrapolate: Sequence[int] = (),
) -> ModelComparison:
    """Fit all three laws to one series and rank them by error.

    Models that cannot be fitted (too few distinct points) are reported
    as skipped rather than raising.  Ranking is by sse, then by fewer
    parameters; where Amdahl and MPF are both present their capacity
    forecasts at the extrapolation points are compared side by side.
    """
    extrapolate = _check_extrapolate(extrapolate)
    x1 = _resolve_baseline(series, baseline)
    pts = [CapacityPoint(p, x / x1) for p, x in series.points]

    reports: list[FitReport] = []
    skipped: list[SkippedFit] = []
    for name, fitter in (
        ("amdahl", fit_amdahl),
        ("mpf", fit_geometric),
        ("usl", fit_usl),
    ):
        try:
            reports.append(replace(fitter(pts, extrapolate), baseline_x1=x1))
        except ValueError as exc:
            skipped.append(SkippedFit(model=name, reason=str(exc)))

    ranked = tuple(
        sorted(reports, key=lambda r: (r.sse, _PARAM_COUNT[r.model]))
    )
    by_model = {r.model: r for r in ranked}
    divergence: list[Divergence] = []
    if "amdahl" in by_model and "mpf" in by_model:
        amdahl_pred = {pr.p: pr.capacity for pr in by_model["amdahl"].predictions}
        mpf_pred = {pr.p: pr.capacity for pr in by_model["mpf"].predictions}
        for p in extrapolate:
            divergence.append(
                Divergence(
                    p=p,
                    amdahl=amdahl_pred[p],
                    mpf=mpf_pred[p],
                    difference=amdahl_pred[p] - mpf_pred[p],
                )
            )
    return ModelComparison(
        reports=ranked, skipped=tuple(skipped), divergence=tuple(divergence)
    )


__all__ = [
    "BenchmarkSeries",
    "PointFit",
    "Prediction",
    "FitReport",
    "SkippedFit",
    "Divergence",
    "ModelComparison",
    "normalize",
    "fit_amdahl",
    "fit_geometric",
    "fit_usl",
    "compare_models",
]
