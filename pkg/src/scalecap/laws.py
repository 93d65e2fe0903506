"""Closed-form multiprocessor scaling laws.

Three capacity models, each mapping a processor count p to relative
capacity C(p) (throughput normalized so C(1) = 1):

* Amdahl:    C(p) = p / (1 + sigma*(p - 1)), serial fraction sigma
* geometric (MPF): C(p) = (1 - phi**p) / (1 - phi), per-step fraction phi
* USL:       C(p) = p / (1 + alpha*((p - 1) + beta*p*(p - 1)))

Amdahl saturates at 1/sigma, the geometric law at 1/(1 - phi), and the
USL with beta > 0 passes through a maximum and then retrogrades.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

# Processor counts are plain machine integers.
MAX_PROCESSORS = 2**31 - 1

# Default search bound for the USL capacity maximum.
PEAK_SEARCH_LIMIT = 100_000


def _check_processors(p: int) -> None:
    if isinstance(p, bool) or not isinstance(p, (int, np.integer)):
        raise ValueError(f"processor count must be an integer, got {p!r}")
    if not 1 <= p <= MAX_PROCESSORS:
        raise ValueError(
            f"processor count must be in [1, {MAX_PROCESSORS}], got {p}"
        )


def _check_unit_interval(name: str, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {value}")


@dataclass(frozen=True)
class Amdahl:
    """Serial-fraction parameters. sigma = 0 is linear, sigma = 1 is flat."""

    sigma: float

    def __post_init__(self) -> None:
        _check_unit_interval("sigma", self.sigma)


@dataclass(frozen=True)
class Geometric:
    """Per-step retention parameters (MPF). phi = 1 gives linear scaling."""

    phi: float

    def __post_init__(self) -> None:
        if not 0.0 < self.phi <= 1.0:
            raise ValueError(f"phi must lie in (0, 1], got {self.phi}")


@dataclass(frozen=True)
class Usl:
    """Contention (alpha) and coherency (beta) parameters."""

    alpha: float
    beta: float

    def __post_init__(self) -> None:
        if not self.alpha >= 0.0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha}")
        if not self.beta >= 0.0:
            raise ValueError(f"beta must be >= 0, got {self.beta}")


ScalingParams = Union[Amdahl, Geometric, Usl]


@dataclass(frozen=True)
class CapacityPoint:
    """One (processor count, relative capacity) pair."""

    p: int
    capacity: float


@dataclass(frozen=True)
class Asymptote:
    """Large-p behaviour of a scaling law.

    value is the saturation ceiling, or None when capacity grows without
    bound.  For retrograde laws the ceiling is 0 and the finite maximum
    is reported through peak_p / peak_capacity.
    """

    value: float | None
    peak_p: int | None = None
    peak_capacity: float | None = None

    @property
    def unbounded(self) -> bool:
        return self.value is None


def amdahl_capacity(sigma: float, p: int) -> float:
    """C(sigma, p) = p / (1 + sigma*(p - 1))."""
    _check_unit_interval("sigma", sigma)
    _check_processors(p)
    return p / (1.0 + sigma * (p - 1))


def amdahl_scaleup(r1: float, sigma: float, p: int) -> float:
    """Absolute throughput form: p*R(1) / (R(1) + sigma*(p - 1)*R(1)).

    The single-processor rate R(1) cancels, so this equals
    amdahl_capacity(sigma, p) up to floating rounding.
    """
    if not r1 > 0.0:
        raise ValueError(f"single-processor rate must be > 0, got {r1}")
    _check_unit_interval("sigma", sigma)
    _check_processors(p)
    return (p * r1) / (r1 + sigma * (p - 1) * r1)


def geometric_capacity(phi: float, p: int) -> float:
    """C(phi, p) = 1 + phi + phi**2 + ... + phi**(p-1).

    Evaluated in closed form, with the phi = 1 branch taken explicitly
    so the removable singularity never hits the divided form.
    """
    _check_unit_interval("phi", phi)
    _check_processors(p)
    if phi == 1.0:
        return float(p)
    return (1.0 - phi**p) / (1.0 - phi)


def usl_capacity(alpha: float, beta: float, p: int) -> float:
    """C(alpha, beta, p) = p / (1 + alpha*((p - 1) + beta*p*(p - 1)))."""
    if not alpha >= 0.0:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    if not beta >= 0.0:
        raise ValueError(f"beta must be >= 0, got {beta}")
    _check_processors(p)
    return p / (1.0 + alpha * ((p - 1) + beta * p * (p - 1)))


def capacity(params: ScalingParams, p: int) -> float:
    """Evaluate whichever law the parameter object selects."""
    if isinstance(params, Amdahl):
        return amdahl_capacity(params.sigma, p)
    if isinstance(params, Geometric):
        return geometric_capacity(params.phi, p)
    if isinstance(params, Usl):
        return usl_capacity(params.alpha, params.beta, p)
    raise TypeError(f"unknown scaling parameters: {params!r}")


def capacity_table(params: ScalingParams, p_max: int) -> list[CapacityPoint]:
    """Capacity at every integer p in [1, p_max]."""
    _check_processors(p_max)
    return [CapacityPoint(p, capacity(params, p)) for p in range(1, p_max + 1)]


def usl_peak(
    alpha: float, beta: float, search_limit: int = PEAK_SEARCH_LIMIT
) -> tuple[int, float]:
    """Integer p maximizing USL capacity, with the capacity there.

    Searches the integer grid 1..search_limit directly rather than
    rounding the real-valued stationary point; ties go to the smaller p.
    """
    if not beta > 0.0:
        raise ValueError("peak search requires beta > 0 (otherwise no maximum)")
    if not alpha >= 0.0:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    _check_processors(search_limit)
    ps = np.arange(1, search_limit + 1, dtype=np.float64)
    caps = ps / (1.0 + alpha * ((ps - 1.0) + beta * ps * (ps - 1.0)))
    best = int(np.argmax(caps))  # first occurrence wins a tie
    return best + 1, float(caps[best])


def asymptote(
    params: ScalingParams, search_limit: int = PEAK_SEARCH_LIMIT
) -> Asymptote:
    """Saturation ceiling of a law, or its peak when it retrogrades."""
    if isinstance(params, Amdahl):
        if params.sigma == 0.0:
            return Asymptote(value=None)
        return Asymptote(value=1.0 / params.sigma)
    if isinstance(params, Geometric):
        if params.phi == 1.0:
            return Asymptote(value=None)
        return Asymptote(value=1.0 / (1.0 - params.phi))
    if isinstance(params, Usl):
        if params.alpha == 0.0:
            return Asymptote(value=None)
        if params.beta == 0.0:
            return Asymptote(value=1.0 / params.alpha)
        peak_p, peak_capacity = usl_peak(params.alpha, params.beta, search_limit)
        return Asymptote(value=0.0, peak_p=peak_p, peak_capacity=peak_capacity)
    raise TypeError(f"unknown scaling parameters: {params!r}")


def amdahl_series_terms(sigma: float, p: int) -> list[float]:
    """Per-processor capacity contributions under the Amdahl law.

    The first processor contributes 1; each of the remaining p - 1
    contributes the degraded share (1 - sigma) / (1 + sigma*(p - 1)).
    The terms sum to amdahl_capacity(sigma, p).
    """
    _check_unit_interval("sigma", sigma)
    _check_processors(p)
    share = (1.0 - sigma) / (1.0 + sigma * (p - 1))
    return [1.0] + [share] * (p - 1)


def match_asymptotic(sigma: float) -> float:
    """phi whose geometric ceiling 1/(1 - phi) equals Amdahl's 1/sigma."""
    if not 0.0 < sigma < 1.0:
        raise ValueError(
            f"asymptote matching needs 0 < sigma < 1, got {sigma}"
        )
    return 1.0 - sigma

def match_leading(sigma: float) -> float:
    """phi giving the geometric law the same initial slope as Amdahl.

    Equating the two laws at p = 2 (the first point where they differ)
    gives 1 + phi = 2 / (1 + sigma), i.e. phi = (1 - sigma) / (1 + sigma).
    """
    _check_unit_interval("sigma", sigma)
    return (1.0 - sigma) / (1.0 + sigma)


__all__ = [
    "MAX_PROCESSORS",
    "PEAK_SEARCH_LIMIT",
    "Amdahl",
    "Geometric",
    "Usl",
    "ScalingParams",
    "CapacityPoint",
    "Asymptote",
    "amdahl_capacity",
    "amdahl_scaleup",
    "geometric_capacity",
    "usl_capacity",
    "capacity",
    "capacity_table",
    "usl_peak",
    "asymptote",
    "amdahl_series_terms",
    "match_asymptotic",
    "match_leading",
]
