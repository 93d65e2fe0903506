"""Discrete-event simulation oracle for the queueing models.

Two simulators, independent of the closed-form solvers:

* a machine-repairman event loop (p stations, one FIFO repairman),
* an open single-server FIFO queue fed by Poisson arrivals with Coxian
  service, advanced by the waiting-time recursion (no event calendar).

Both draw from a counter-based generator seeded explicitly, discard a
warmup prefix of completions, and report batch-means confidence
intervals.  Every result carries the seed that produced it.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from itertools import count

import numpy as np
from scipy.stats import t as student_t

from .queueing import CoxianSpec, RepairmanConfig, coxian_moments

DEFAULT_WARMUP = 10_000
DEFAULT_MEASURED = 200_000
DEFAULT_BATCHES = 20

_ARRIVE = 0
_DEPART = 1


@dataclass(frozen=True)
class SimConfig:
    """Run length and reproducibility controls."""

    seed: int
    warmup_completions: int = DEFAULT_WARMUP
    measured_completions: int = DEFAULT_MEASURED
    batches: int = DEFAULT_BATCHES

    def __post_init__(self) -> None:
        if isinstance(self.seed, bool) or not isinstance(self.seed, int):
            raise ValueError(f"seed must be an integer, got {self.seed!r}")
        if self.seed < 0:
            raise ValueError(f"seed must be >= 0, got {self.seed}")
        if self.warmup_completions < 0:
            raise ValueError(
                f"warmup completions must be >= 0, got {self.warmup_completions}"
            )
        if self.batches < 2:
            raise ValueError(f"need at least 2 batches, got {self.batches}")
        if self.measured_completions < self.batches:
            raise ValueError(
                "measured completions must cover the batch count, got "
                f"{self.measured_completions} < {self.batches}"
            )


@dataclass(frozen=True)
class SimEstimate:
    """A point estimate with a 95% batch-means half width."""

    mean: float
    half_width: float
    samples: int

    def contains(self, value: float) -> bool:
        return abs(value - self.mean) <= self.half_width


@dataclass(frozen=True)
class RepairmanSimResult:
    x: SimEstimate      # system throughput
    r: SimEstimate      # repair-center residence time
    seed: int


@dataclass(frozen=True)
class Mg1SimResult:
    r: SimEstimate      # mean response time
    seed: int


def _rng(seed: int) -> np.random.Generator:
    # Counter-based bit generator: streams for nearby seeds are unrelated.
    return np.random.Generator(np.random.Philox(seed))


def batch_means(values: np.ndarray, batches: int) -> SimEstimate:
    """Student-t 95% interval over contiguous batch averages."""
    values = np.asarray(values, dtype=np.float64)
    if batches < 2:
        raise ValueError(f"need at least 2 batches, got {batches}")
    if values.size < batches:
        raise ValueError(
            f"need at least one value per batch, got {values.size} for {batches}"
        )
    means = np.array([g.mean() for g in np.array_split(values, batches)])
    half = float(
        student_t.ppf(0.975, batches - 1) * means.std(ddof=1) / math.sqrt(batches)
    )
    return SimEstimate(mean=float(means.mean()), half_width=half, samples=values.size)


def sample_coxian_service(spec: CoxianSpec, rng: np.random.Generator) -> float:
    """One service time, walking the stage chain literally."""
    elapsed = 0.0
    for mu_i, a_i in zip(spec.mu, spec.a):
        elapsed += rng.exponential(1.0 / mu_i)
        if a_i == 0.0:
            break
        if a_i < 1.0 and rng.random() >= a_i:
            break
    return elapsed


def sample_coxian_services(
    spec: CoxianSpec, n: int, rng: np.random.Generator
) -> np.ndarray:
    """n service times via a vectorized walk over the stage chain.

    Jobs still in the chain are tracked by index; each stage adds an
    exponential draw for the survivors and thins them by the continue
    probability.
    """
    if n < 0:
        raise ValueError(f"sample count must be >= 0, got {n}")
    out = np.zeros(n, dtype=np.float64)
    active = np.arange(n)
    for mu_i, a_i in zip(spec.mu, spec.a):
        if active.size == 0:
            break
        out[active] += rng.exponential(1.0 / mu_i, active.size)
        if a_i == 0.0:
            break
        if a_i < 1.0:
            active = active[rng.random(active.size) < a_i]
    return out


def simulate_repairman(
    config: RepairmanConfig, sim: SimConfig
) -> RepairmanSimResult:
    """Event-driven run of the closed repairman model.

    Stations alternate exponential think periods (mean z) with FIFO
    repair visits (exponential, mean d).  Residence time is measured
    from joining the repair queue to leaving the repairman.  Ties in
    event time are broken by insertion order.
    """
    rng = _rng(sim.seed)
    total = sim.warmup_completions + sim.measured_completions
    responses = np.empty(sim.measured_completions, dtype=np.float64)
    completion_times = np.empty(sim.measured_completions, dtype=np.float64)

    heap: list[tuple[float, int, int, float]] = []
    seq = count()

    def schedule(at: float, kind: int, joined: float) -> None:
        heapq.heappush(heap, (at, next(seq), kind, joined))

    for _ in range(config.p):
        schedule(rng.exponential(config.z), _ARRIVE, 0.0)

    waiting: list[float] = []   # queue join times, FIFO
    head = 0                    # popleft index into waiting
    busy = False
    done = 0
    measure_start = 0.0

    while done < total:
        now, _, kind, joined = heapq.heappop(heap)
        if kind == _ARRIVE:
            waiting.append(now)
            if not busy:
                busy = True
                schedule(now + rng.exponential(config.d), _DEPART, waiting[head])
                head += 1
        else:
            done += 1
            k = done - sim.warmup_completions
            if k > 0:
                responses[k - 1] = now - joined
                completion_times[k - 1] = now
            elif done == sim.warmup_completions:
                measure_start = now
            if head < len(waiting):
                schedule(now + rng.exponential(config.d), _DEPART, waiting[head])
                head += 1
            else:
                busy = False
                waiting.clear()
                head = 0
            schedule(now + rng.exponential(config.z), _ARRIVE, 0.0)

    r_est = batch_means(responses, sim.batches)
    rates = []
    prev = measure_start
    for g in np.array_split(completion_times, sim.batches):
        rates.append(g.size / (g[-1] - prev))
        prev = g[-1]
    rates = np.array(rates)
    half = float(
        student_t.ppf(0.975, sim.batches - 1)
        * rates.std(ddof=1)
        / math.sqrt(sim.batches)
    )
    x_est = SimEstimate(
        mean=float(rates.mean()),
        half_width=half,
        samples=sim.measured_completions,
    )
    return RepairmanSimResult(x=x_est, r=r_est, seed=sim.seed)


def simulate_mg1_coxian(
    rate: float, spec: CoxianSpec, sim: SimConfig
) -> Mg1SimResult:
    """Open M/G/1 FIFO run with Coxian service, via the waiting-time
    recursion W[k+1] = max(0, W[k] + S[k] - A[k+1]).

    The recursion is evaluated in closed form with a running minimum of
    the random-walk partial sums, so the whole run is vectorized.
    """
    if not rate > 0.0:
        raise ValueError(f"arrival rate must be > 0, got {rate}")
    load = rate * coxian_moments(spec).mean
    if load >= 1.0:
        raise ValueError(f"unstable: offered load {load:.6g} >= 1")
    rng = _rng(sim.seed)
    n = sim.warmup_completions + sim.measured_completions
    services = sample_coxian_services(spec, n, rng)
    gaps = rng.exponential(1.0 / rate, n)

    waits = np.empty(n, dtype=np.float64)
    waits[0] = 0.0
    if n > 1:
        steps = services[:-1] - gaps[1:]
        walk = np.cumsum(steps)
        # min over walk[0..k-1] and 0, shifted to align with customer k+1
        floor = np.minimum.accumulate(np.concatenate(([0.0], walk)))[:-1]
        waits[1:] = np.maximum(0.0, walk - floor)

    responses = waits + services
    r_est = batch_means(responses[sim.warmup_completions :], sim.batches)
    return Mg1SimResult(r=r_est, seed=sim.seed)


__all__ = [
    "DEFAULT_WARMUP",
    "DEFAULT_MEASURED",
    "DEFAULT_BATCHES",
    "SimConfig",
    "SimEstimate",
    "RepairmanSimResult",
    "Mg1SimResult",
    "batch_means",
    "sample_coxian_service",
    "sample_coxian_services",
    "simulate_repairman",
    "simulate_mg1_coxian",
]
