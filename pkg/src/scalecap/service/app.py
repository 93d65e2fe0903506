"""HTTP service over the scaling-law toolkit.

Every route is a pure function of its request body; the handlers are
plain callables so the CLI can invoke them in process without a server.
Domain errors (ValueError) map to HTTP 422 with a detail string.
"""

from __future__ import annotations

from dataclasses import asdict, replace

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..fitting import (
    BenchmarkSeries,
    FitReport,
    ModelComparison,
    compare_models,
    fit_amdahl,
    fit_geometric,
    fit_usl,
    normalize,
)
from ..laws import (
    Amdahl,
    Geometric,
    ScalingParams,
    Usl,
    amdahl_capacity,
    asymptote,
    capacity,
    geometric_capacity,
    match_asymptotic,
    match_leading,
)
from ..queueing import (
    CoxianSpec,
    RepairmanConfig,
    coxian_moments,
    pk_response,
    repairman_exact,
    sigma_from,
    sync_capacity,
    sync_response,
    sync_throughput,
)
from ..simulate import SimConfig, simulate_mg1_coxian, simulate_repairman
from .schemas import (
    AsymptoteOut,
    CompareOut,
    CoxianRequest,
    CurvesRequest,
    DivergenceOut,
    FitOut,
    FitRequest,
    HealthOut,
    MatchOut,
    MatchRequest,
    PointFitOut,
    PredictionOut,
    RepairmanRequest,
    SimRunOut,
    SimulateOut,
    SimulateRequest,
    SkippedOut,
    TableOut,
)

app = FastAPI(title="scalecap", version=__version__)

_FITTERS = {"amdahl": fit_amdahl, "mpf": fit_geometric, "usl": fit_usl}


@app.exception_handler(ValueError)
async def _domain_error(request: Request, exc: ValueError) -> JSONResponse:
    return JSONResponse(status_code=422, content={"detail": str(exc)})


@app.get("/health")
def health() -> HealthOut:
    return HealthOut(status="ok", version=__version__)


def _asymptote_out(params: ScalingParams) -> AsymptoteOut:
    a = asymptote(params)
    return AsymptoteOut(
        value=a.value,
        unbounded=a.unbounded,
        peak_p=a.peak_p,
        peak_capacity=a.peak_capacity,
    )


def _fit_out(report: FitReport) -> FitOut:
    return FitOut(
        model=report.model,
        params={k: float(v) for k, v in asdict(report.params).items()},
        sse=report.sse,
        r2=report.r2,
        asymptote=AsymptoteOut(
            value=report.asymptote.value,
            unbounded=report.asymptote.unbounded,
            peak_p=report.asymptote.peak_p,
            peak_capacity=report.asymptote.peak_capacity,
        ),
        points=[
            PointFitOut(p=r.p, measured=r.measured, fitted=r.fitted)
            for r in report.residuals
        ],
        clamped=list(report.clamped),
        baseline_x1=report.baseline_x1,
        predictions=[
            PredictionOut(p=pr.p, capacity=pr.capacity) for pr in report.predictions
        ],
    )


def _compare_out(comparison: ModelComparison) -> CompareOut:
    return CompareOut(
        models=[_fit_out(r) for r in comparison.reports],
        skipped=[
            SkippedOut(model=s.model, reason=s.reason) for s in comparison.skipped
        ],
        divergence=[
            DivergenceOut(p=d.p, amdahl=d.amdahl, mpf=d.mpf, difference=d.difference)
            for d in comparison.divergence
        ],
    )


@app.post("/fit")
def fit_models(req: FitRequest) -> CompareOut:
    series = BenchmarkSeries(
        label=req.label, points=tuple((pt.p, pt.throughput) for pt in req.points)
    )
    if req.model == "all":
        return _compare_out(
            compare_models(series, baseline=req.baseline, extrapolate=req.extrapolate)
        )
    points = normalize(series, req.baseline)
    x1 = req.baseline if req.baseline is not None else dict(series.points)[1]
    report = _FITTERS[req.model](points, extrapolate=req.extrapolate)
    report = replace(report, baseline_x1=float(x1))
    return CompareOut(models=[_fit_out(report)], skipped=[], divergence=[])


@app.post("/curves")
def curve_table(req: CurvesRequest) -> TableOut:
    specs: list[tuple[str, ScalingParams]] = []
    notes: list[str] = []
    phi = req.phi
    if req.matching != "none":
        if req.sigma is None:
            raise ValueError(f"matching={req.matching} needs sigma")
        if req.phi is not None:
            raise ValueError("give either phi or a matching mode, not both")
        if req.matching == "asymptotic":
            phi = match_asymptotic(req.sigma)
        else:
            phi = match_leading(req.sigma)
    if req.sigma is not None:
        specs.append(("c_amdahl", Amdahl(req.sigma)))
        notes.append(f"amdahl: sigma={req.sigma!r}")
    if phi is not None:
        specs.append(("c_mpf", Geometric(phi)))
        if req.matching != "none":
            notes.append(
                f"mpf: phi={phi!r} ({req.matching} match from sigma={req.sigma!r})"
            )
        else:
            notes.append(f"mpf: phi={phi!r}")
    if (req.alpha is None) != (req.beta is None):
        raise ValueError("alpha and beta must be given together")
    if req.alpha is not None:
        specs.append(("c_usl", Usl(req.alpha, req.beta)))
        notes.append(f"usl: alpha={req.alpha!r} beta={req.beta!r}")
    if not specs:
        raise ValueError("no model selected: give sigma, phi, or alpha and beta")
    columns = ["p"] + [name for name, _ in specs]
    rows: list[list[int | float]] = []
    for p in range(1, req.p_max + 1):
        rows.append([p] + [capacity(params, p) for _, params in specs])
    return TableOut(columns=columns, rows=rows, notes=notes)


@app.post("/repairman")
def repairman_table(req: RepairmanRequest) -> TableOut:
    sigma = req.d / (req.d + req.z)
    columns = ["p"]
    if req.mode in ("sync", "both"):
        columns += ["x_sync", "r_sync", "c_sync"]
        if req.mode == "both":
            columns += ["c_amdahl"]
    if req.mode in ("exact", "both"):
        columns += ["x_exact", "r_exact", "q_exact", "u_bus", "u_proc"]
    rows: list[list[int | float]] = []
    for p in range(1, req.p_max + 1):
        config = RepairmanConfig(p=p, d=req.d, z=req.z)
        row: list[int | float] = [p]
        if req.mode in ("sync", "both"):
            row += [
                sync_throughput(config),
                sync_response(config),
                sync_capacity(config),
            ]
            if req.mode == "both":
                row.append(amdahl_capacity(sigma_from(config), p))
        if req.mode in ("exact", "both"):
            exact = repairman_exact(config)
            row += [exact.x, exact.r, exact.q, exact.u_bus, exact.u_proc]
        rows.append(row)
    notes = [f"d={req.d!r} z={req.z!r} sigma={sigma!r} mode={req.mode}"]
    return TableOut(columns=columns, rows=rows, notes=notes)


@app.post("/coxian")
def coxian_table(req: CoxianRequest) -> TableOut:
    columns = ["p", "mean_s", "scv", "u", "r"]
    rows: list[list[int | float]] = []
    for p in range(1, req.p_max + 1):
        moments = coxian_moments(CoxianSpec.uniform(req.mu, req.phi, p))
        rows.append(
            [p, moments.mean, moments.scv, req.rho, pk_response(moments, req.rho)]
        )
    notes = [
        f"mu={req.mu!r} phi={req.phi!r} rho={req.rho!r}"
        " (total utilization held fixed, arrival rate rescaled per row)"
    ]
    return TableOut(columns=columns, rows=rows, notes=notes)


@app.post("/simulate")
def run_simulation(req: SimulateRequest) -> SimulateOut:
    runs: list[SimRunOut] = []
    if req.scenario == "repairman":
        if req.p is None or req.d is None or req.z is None:
            raise ValueError("repairman scenario needs p, d and z")
        config = RepairmanConfig(p=req.p, d=req.d, z=req.z)
        analytic = repairman_exact(config).x
        quantity = "throughput"
        for i in range(req.repeat):
            sim = SimConfig(
                seed=req.seed + i,
                warmup_completions=req.warmup,
                measured_completions=req.completions,
                batches=req.batches,
            )
            est = simulate_repairman(config, sim).x
            runs.append(_run_out(sim.seed, est, analytic))
    else:
        if req.rate is None or req.mu is None or req.phi is None or req.stages is None:
            raise ValueError("mg1 scenario needs rate, mu, phi and stages")
        spec = CoxianSpec.uniform(req.mu, req.phi, req.stages)
        moments = coxian_moments(spec)
        load = req.rate * moments.mean
        if load >= 1.0:
            raise ValueError(f"unstable: offered load {load:.6g} >= 1")
        analytic = pk_response(moments, load)
        quantity = "response"
        for i in range(req.repeat):
            sim = SimConfig(
                seed=req.seed + i,
                warmup_completions=req.warmup,
                measured_completions=req.completions,
                batches=req.batches,
            )
            est = simulate_mg1_coxian(req.rate, spec, sim).r
            runs.append(_run_out(sim.seed, est, analytic))
    return SimulateOut(scenario=req.scenario, quantity=quantity, runs=runs)


def _run_out(seed, est, analytic) -> SimRunOut:
    inside = est.contains(analytic)
    return SimRunOut(
        seed=seed,
        mean=est.mean,
        half_width=est.half_width,
        samples=est.samples,
        analytic=analytic,
        inside=inside,
        verdict="PASS" if inside else "FAIL",
    )


@app.post("/match")
def match_params(req: MatchRequest) -> MatchOut:
    if req.mode == "asymptotic":
        phi = match_asymptotic(req.sigma)
    else:
        phi = match_leading(req.sigma)
    return MatchOut(
        mode=req.mode,
        sigma=req.sigma,
        phi=phi,
        amdahl_asymptote=None if req.sigma == 0.0 else 1.0 / req.sigma,
        mpf_asymptote=None if phi == 1.0 else 1.0 / (1.0 - phi),
        amdahl_c2=amdahl_capacity(req.sigma, 2),
        mpf_c2=geometric_capacity(phi, 2),
    )


__all__ = [
    "app",
    "health",
    "fit_models",
    "curve_table",
    "repairman_table",
    "coxian_table",
    "run_simulation",
    "match_params",
]
