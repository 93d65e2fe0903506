"""Benchmark CSV ingestion.

The accepted dialect is deliberately small: a required ``p,throughput``
header, ``#`` comment lines, blank lines ignored, and two numeric
columns with a decimal point (no locale-dependent separators).  Parsing
is strict; malformed input is reported with line numbers instead of
being skipped.
"""

from __future__ import annotations

import io
import math
from pathlib import Path

from .fitting import BenchmarkSeries

HEADER = ("p", "throughput")


def parse_benchmark_csv(text: str, label: str = "series") -> BenchmarkSeries:
    """Parse CSV text into a benchmark series.

    Raises ValueError naming the problem and the offending line numbers
    for a missing header, malformed rows, duplicate processor counts,
    or an empty body.
    """
    header_seen = False
    rows: list[tuple[int, float]] = []
    seen_p: dict[int, int] = {}
    bad: list[str] = []
    for lineno, raw in enumerate(io.StringIO(text), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = [f.strip() for f in line.split(",")]
        if not header_seen:
            if tuple(fields) != HEADER:
                raise ValueError(
                    f'line {lineno}: expected header "p,throughput", got {line!r}'
                )
            header_seen = True
            continue
        if len(fields) != 2:
            bad.append(f"line {lineno}: expected 2 fields, got {len(fields)}")
            continue
        try:
            p = int(fields[0])
            x = float(fields[1])
        except ValueError:
            bad.append(f"line {lineno}: could not parse {line!r}")
            continue
        if p < 1:
            bad.append(f"line {lineno}: processor count must be >= 1, got {p}")
            continue
        if not (x > 0.0 and math.isfinite(x)):
            bad.append(f"line {lineno}: throughput must be a finite positive number")
            continue
        if p in seen_p:
            bad.append(
                f"line {lineno}: duplicate measurement at p = {p}"
                f" (first seen on line {seen_p[p]})"
            )
            continue
        seen_p[p] = lineno
        rows.append((p, x))
    if not header_seen:
        raise ValueError('missing header "p,throughput"')
    if bad:
        raise ValueError("malformed benchmark CSV: " + "; ".join(bad))
    if not rows:
        raise ValueError("no data rows after the header")
    return BenchmarkSeries(label=label, points=tuple(rows))


def read_benchmark_csv(path: str | Path) -> BenchmarkSeries:
    """Read and parse the benchmark CSV at path."""
    path = Path(path)
    return parse_benchmark_csv(path.read_text(encoding="utf-8"), label=path.stem)


def format_benchmark_csv(series: BenchmarkSeries) -> str:
    """Render a series back to the same dialect, full float precision."""
    lines = ["p,throughput"]
    lines.extend(f"{p},{x!r}" for p, x in series.points)
    return "\n".join(lines) + "\n"


__all__ = ["HEADER", "parse_benchmark_csv", "read_benchmark_csv", "format_benchmark_csv"]
