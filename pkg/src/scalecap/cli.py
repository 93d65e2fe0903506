"""Command-line client for the scaling-law toolkit.

By default each subcommand builds a request body and calls the service
handler in process; with --server the same body is POSTed to a running
instance.  Output formats: human table (6 significant digits), CSV and
JSON (both full precision, byte-deterministic for fixed inputs).

Exit codes: 0 success, 2 input or validation error, 3 internal numeric
failure (a non-finite number reached the output).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import httpx
from numpy.linalg import LinAlgError
from pydantic import BaseModel, ValidationError

from .ingest import read_benchmark_csv
from .service import schemas
from .service.app import (
    coxian_table,
    curve_table,
    fit_models,
    match_params,
    repairman_table,
    run_simulation,
)
from .simulate import DEFAULT_BATCHES, DEFAULT_MEASURED, DEFAULT_WARMUP

DEFAULT_SEED = 42
SEED_ENV = "SCALECAP_SEED"

_HANDLERS = {
    "fit": (fit_models, schemas.CompareOut),
    "curves": (curve_table, schemas.TableOut),
    "repairman": (repairman_table, schemas.TableOut),
    "coxian": (coxian_table, schemas.TableOut),
    "simulate": (run_simulation, schemas.SimulateOut),
    "match": (match_params, schemas.MatchOut),
}

_DEFAULT_FORMAT = {
    "fit": "table",
    "curves": "csv",
    "repairman": "csv",
    "coxian": "csv",
    "simulate": "table",
    "match": "table",
}


class NumericFailure(RuntimeError):
    """A non-finite number reached the rendered output."""


def _add_format_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--csv", action="store_true", help="emit CSV")
    group.add_argument("--json", action="store_true", help="emit JSON")
    group.add_argument("--table", action="store_true", help="emit a human table")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scalecap",
        description="Scaling-law analysis: fit, evaluate, and cross-check "
        "the Amdahl, MPF and USL capacity models.",
    )
    parser.add_argument(
        "--server",
        metavar="URL",
        help="POST the request to a running service instead of computing locally",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    fit = sub.add_parser("fit", help="fit scaling laws to a benchmark CSV")
    fit.add_argument("input", help='CSV file with header "p,throughput"')
    fit.add_argument(
        "--model", choices=["amdahl", "mpf", "usl", "all"], default="all"
    )
    fit.add_argument(
        "--baseline",
        type=float,
        help="single-processor throughput (required when the series has no p=1 row)",
    )
    fit.add_argument(
        "--extrapolate",
        type=int,
        nargs="+",
        default=[],
        metavar="P",
        help="also predict capacity at these processor counts",
    )
    _add_format_flags(fit)

    curves = sub.add_parser("curves", help="tabulate capacity curves over p")
    curves.add_argument("--sigma", type=float, help="Amdahl serial fraction")
    curves.add_argument("--phi", type=float, help="MPF retention factor")
    curves.add_argument("--alpha", type=float, help="USL contention parameter")
    curves.add_argument("--beta", type=float, help="USL coherency parameter")
    curves.add_argument(
        "--matching",
        choices=["none", "asymptotic", "leading"],
        default="none",
        help="derive phi from sigma so both laws share an asymptote or slope",
    )
    curves.add_argument("--p-max", type=int, default=32)
    _add_format_flags(curves)

    repairman = sub.add_parser(
        "repairman", help="closed repairman model: exact MVA vs synchronous bound"
    )
    repairman.add_argument("--d", type=float, required=True, help="service demand D")
    repairman.add_argument("--z", type=float, required=True, help="think time Z")
    repairman.add_argument("--p-max", type=int, default=32)
    repairman.add_argument(
        "--mode", choices=["exact", "sync", "both"], default="both"
    )
    _add_format_flags(repairman)

    coxian = sub.add_parser(
        "coxian", help="uniform Coxian service: moments and M/G/1 response vs stages"
    )
    coxian.add_argument("--mu", type=float, required=True, help="stage rate")
    coxian.add_argument("--phi", type=float, required=True, help="advance probability")
    coxian.add_argument(
        "--rho", type=float, required=True, help="total utilization, held fixed"
    )
    coxian.add_argument("--p-max", type=int, default=32)
    _add_format_flags(coxian)

    simulate = sub.add_parser(
        "simulate", help="discrete-event run checked against the analytic value"
    )
    simulate.add_argument("scenario", choices=["repairman", "mg1"])
    simulate.add_argument("--p", type=int, help="station count (repairman)")
    simulate.add_argument("--d", type=float, help="service demand (repairman)")
    simulate.add_argument("--z", type=float, help="think time (repairman)")
    simulate.add_argument("--rate", type=float, help="arrival rate (mg1)")
    simulate.add_argument("--mu", type=float, help="stage rate (mg1)")
    simulate.add_argument("--phi", type=float, help="advance probability (mg1)")
    simulate.add_argument("--stages", type=int, help="stage count (mg1)")
    simulate.add_argument(
        "--seed",
        type=int,
        help=f"RNG seed (default: ${SEED_ENV} or {DEFAULT_SEED})",
    )
    simulate.add_argument("--completions", type=int, default=DEFAULT_MEASURED)
    simulate.add_argument("--warmup", type=int, default=DEFAULT_WARMUP)
    simulate.add_argument("--batches", type=int, default=DEFAULT_BATCHES)
    simulate.add_argument(
        "--repeat", type=int, default=1, help="independent runs on derived seeds"
    )
    _add_format_flags(simulate)

    match = sub.add_parser(
        "match", help="derive the MPF phi matching an Amdahl sigma"
    )
    match.add_argument("--sigma", type=float, required=True)
    match.add_argument(
        "--mode", choices=["asymptotic", "leading"], required=True
    )
    _add_format_flags(match)

    return parser


def _env_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def _build_request(args: argparse.Namespace) -> BaseModel:
    if args.command == "fit":
        series = read_benchmark_csv(args.input)
        return schemas.FitRequest(
            points=[
                schemas.PointIn(p=p, throughput=x) for p, x in series.points
            ],
            model=args.model,
            baseline=args.baseline,
            extrapolate=args.extrapolate,
            label=series.label,
        )
    if args.command == "curves":
        return schemas.CurvesRequest(
            sigma=args.sigma,
            phi=args.phi,
            alpha=args.alpha,
            beta=args.beta,
            matching=args.matching,
            p_max=args.p_max,
        )
    if args.command == "repairman":
        return schemas.RepairmanRequest(
            d=args.d, z=args.z, p_max=args.p_max, mode=args.mode
        )
    if args.command == "coxian":
        return schemas.CoxianRequest(
            mu=args.mu, phi=args.phi, rho=args.rho, p_max=args.p_max
        )
    if args.command == "simulate":
        seed = args.seed if args.seed is not None else _env_seed()
        return schemas.SimulateRequest(
            scenario=args.scenario,
            p=args.p,
            d=args.d,
            z=args.z,
            rate=args.rate,
            mu=args.mu,
            phi=args.phi,
            stages=args.stages,
            seed=seed,
            completions=args.completions,
            warmup=args.warmup,
            batches=args.batches,
            repeat=args.repeat,
        )
    if args.command == "match":
        return schemas.MatchRequest(sigma=args.sigma, mode=args.mode)
    raise ValueError(f"unknown command {args.command!r}")


def _remote(server: str, command: str, request: BaseModel, response_cls):
    url = server.rstrip("/") + "/" + command
    try:
        resp = httpx.post(url, json=request.model_dump(), timeout=600.0)
    except httpx.HTTPError as exc:
        raise ValueError(f"request to {url} failed: {exc}") from None
    if resp.status_code == 422:
        detail = resp.json().get("detail", resp.text)
        if not isinstance(detail, str):
            detail = json.dumps(detail)
        raise ValueError(detail)
    if resp.status_code != 200:
        raise ValueError(f"{url} returned HTTP {resp.status_code}")
    return response_cls.model_validate(resp.json())


def _assert_finite(obj) -> None:
    if isinstance(obj, bool):
        return
    if isinstance(obj, float) and not math.isfinite(obj):
        raise NumericFailure("a non-finite number reached the output")
    if isinstance(obj, dict):
        for v in obj.values():
            _assert_finite(v)
    elif isinstance(obj, (list, tuple)):
        for v in obj:
            _assert_finite(v)


def _gnum(v) -> str:
    """Human format: 6 significant digits."""
    if v is None:
        return "-"
    if isinstance(v, bool):
        return str(v)
    if isinstance(v, int):
        return str(v)
    return format(v, ".6g")


def _fnum(v) -> str:
    """Full-precision format, round-trip safe."""
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(v)
    if isinstance(v, int):
        return str(v)
    return repr(float(v))


def _format_of(args: argparse.Namespace) -> str:
    if args.csv:
        return "csv"
    if args.json:
        return "json"
    if args.table:
        return "table"
    return _DEFAULT_FORMAT[args.command]


def _csv_lines(columns, rows, notes) -> str:
    lines = [f"# {note}" for note in notes]
    lines.append(",".join(columns))
    lines.extend(",".join(_fnum(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _aligned_table(columns, rows, notes) -> str:
    cells = [list(columns)] + [[_gnum(v) for v in row] for row in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(columns))]
    lines = [note for note in notes]
    for row in cells:
        lines.append("  ".join(v.rjust(w) for v, w in zip(row, widths)))
    return "\n".join(lines) + "\n"


def _render_fit(payload: schemas.CompareOut, args, fmt: str) -> str:
    single = args.model != "all"
    if fmt == "json":
        if single:
            return json.dumps(payload.models[0].model_dump(), indent=2) + "\n"
        return json.dumps(payload.model_dump(), indent=2) + "\n"
    if fmt == "csv":
        notes = []
        for m in payload.models:
            params = " ".join(f"{k}={_fnum(v)}" for k, v in m.params.items())
            notes.append(
                f"{m.model}: {params} sse={_fnum(m.sse)} r2={_fnum(m.r2)}"
            )
        for s in payload.skipped:
            notes.append(f"{s.model}: skipped ({s.reason})")
        rows = [
            [m.model, pt.p, pt.measured, pt.fitted]
            for m in payload.models
            for pt in m.points
        ]
        lines = [f"# {note}" for note in notes]
        lines.append("model,p,measured,fitted")
        lines.extend(
            ",".join([r[0], _fnum(r[1]), _fnum(r[2]), _fnum(r[3])]) for r in rows
        )
        return "\n".join(lines) + "\n"
    # human table
    out = []
    for rank, m in enumerate(payload.models, start=1):
        head = f"model: {m.model}" if single else f"rank {rank}: {m.model}"
        out.append(head)
        for k, v in m.params.items():
            out.append(f"  {k} = {_gnum(v)}")
        out.append(f"  sse = {_gnum(m.sse)}")
        out.append(f"  r2 = {_gnum(m.r2)}")
        if m.asymptote.unbounded:
            out.append("  asymptote = unbounded")
        elif m.asymptote.peak_p is not None:
            out.append(
                f"  peak capacity = {_gnum(m.asymptote.peak_capacity)}"
                f" at p = {m.asymptote.peak_p} (retrograde beyond)"
            )
        else:
            out.append(f"  asymptote = {_gnum(m.asymptote.value)}")
        if m.clamped:
            out.append(f"  clamped: {', '.join(m.clamped)}")
        out.append("  points:")
        for pt in m.points:
            out.append(
                f"    p={pt.p}  measured={_gnum(pt.measured)}"
                f"  fitted={_gnum(pt.fitted)}"
            )
        for pr in m.predictions:
            out.append(f"  predicted capacity at p={pr.p}: {_gnum(pr.capacity)}")
    for s in payload.skipped:
        out.append(f"skipped: {s.model} ({s.reason})")
    for d in payload.divergence:
        out.append(
            f"divergence at p={d.p}: amdahl {_gnum(d.amdahl)}"
            f" vs mpf {_gnum(d.mpf)} (difference {_gnum(d.difference)})"
        )
    return "\n".join(out) + "\n"


def _render_simulate(payload: schemas.SimulateOut, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload.model_dump(), indent=2) + "\n"
    columns = ["seed", "mean", "half_width", "samples", "analytic", "verdict"]
    rows = [
        [r.seed, r.mean, r.half_width, r.samples, r.analytic, r.verdict]
        for r in payload.runs
    ]
    notes = [f"scenario: {payload.scenario} ({payload.quantity})"]
    if fmt == "csv":
        lines = [f"# {note}" for note in notes]
        lines.append(",".join(columns))
        for r in rows:
            lines.append(
                ",".join(_fnum(v) if not isinstance(v, str) else v for v in r)
            )
        return "\n".join(lines) + "\n"
    cells = [columns] + [
        [_gnum(v) if not isinstance(v, str) else v for v in row] for row in rows
    ]
    widths = [max(len(row[i]) for row in cells) for i in range(len(columns))]
    lines = list(notes)
    for row in cells:
        lines.append("  ".join(v.rjust(w) for v, w in zip(row, widths)))
    return "\n".join(lines) + "\n"


def _render_match(payload: schemas.MatchOut, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload.model_dump(), indent=2) + "\n"
    if fmt == "csv":
        columns = [
            "mode",
            "sigma",
            "phi",
            "amdahl_asymptote",
            "mpf_asymptote",
            "amdahl_c2",
            "mpf_c2",
        ]
        row = [
            payload.mode,
            _fnum(payload.sigma),
            _fnum(payload.phi),
            _fnum(payload.amdahl_asymptote),
            _fnum(payload.mpf_asymptote),
            _fnum(payload.amdahl_c2),
            _fnum(payload.mpf_c2),
        ]
        return ",".join(columns) + "\n" + ",".join(row) + "\n"
    amdahl_a = "unbounded" if payload.amdahl_asymptote is None else _gnum(
        payload.amdahl_asymptote
    )
    mpf_a = "unbounded" if payload.mpf_asymptote is None else _gnum(
        payload.mpf_asymptote
    )
    lines = [
        f"mode: {payload.mode}",
        f"sigma = {_gnum(payload.sigma)}",
        f"phi = {_gnum(payload.phi)}",
        f"amdahl asymptote = {amdahl_a}",
        f"mpf asymptote = {mpf_a}",
        f"capacity at p=2: amdahl {_gnum(payload.amdahl_c2)},"
        f" mpf {_gnum(payload.mpf_c2)}",
    ]
    return "\n".join(lines) + "\n"


def _render(args: argparse.Namespace, payload: BaseModel) -> str:
    fmt = _format_of(args)
    if isinstance(payload, schemas.TableOut):
        if fmt == "json":
            return json.dumps(payload.model_dump(), indent=2) + "\n"
        if fmt == "csv":
            return _csv_lines(payload.columns, payload.rows, payload.notes)
        return _aligned_table(payload.columns, payload.rows, payload.notes)
    if isinstance(payload, schemas.CompareOut):
        return _render_fit(payload, args, fmt)
    if isinstance(payload, schemas.SimulateOut):
        return _render_simulate(payload, fmt)
    if isinstance(payload, schemas.MatchOut):
        return _render_match(payload, fmt)
    return json.dumps(payload.model_dump(), indent=2) + "\n"


def _validation_message(exc: ValidationError) -> str:
    parts = []
    for err in exc.errors():
        loc = ".".join(str(x) for x in err["loc"]) or "request"
        parts.append(f"{loc}: {err['msg']}")
    return "; ".join(parts)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        request = _build_request(args)
        handler, response_cls = _HANDLERS[args.command]
        if args.server:
            payload = _remote(args.server, args.command, request, response_cls)
        else:
            payload = handler(request)
        _assert_finite(payload.model_dump())
        text = _render(args, payload)
    except ValidationError as exc:
        print(f"error: {_validation_message(exc)}", file=sys.stderr)
        return 2
    except LinAlgError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3
    except NumericFailure as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ArithmeticError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3
    sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
