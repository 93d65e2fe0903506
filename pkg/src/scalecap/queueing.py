"""Queueing interpretations of the scaling laws.

Two centers back the closed-form laws:

* a machine-repairman station (p stations, one repairman) whose
  synchronous-demand bound reproduces the Amdahl law, and
* an open M/G/1 queue with uniform Coxian service whose utilization
  scales exactly like the geometric (MPF) law.

Service demand D and think time Z are in the same time unit; rates are
their reciprocals.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class RepairmanConfig:
    """Closed machine-repairman model: p stations, service demand d,
    think (uptime) period z."""

    p: int
    d: float
    z: float

    def __post_init__(self) -> None:
        if isinstance(self.p, bool) or not isinstance(self.p, int):
            raise ValueError(f"station count must be an integer, got {self.p!r}")
        if self.p < 1:
            raise ValueError(f"station count must be >= 1, got {self.p}")
        if not self.d > 0.0:
            raise ValueError(f"service demand must be > 0, got {self.d}")
        if not self.z >= 0.0:
            raise ValueError(f"think time must be >= 0, got {self.z}")


@dataclass(frozen=True)
class RepairmanSolution:
    """Steady-state metrics of the closed model at population p."""

    x: float        # system throughput
    r: float        # residence time at the repair center
    q: float        # mean number at the repair center
    u_bus: float    # repair-center (bus) utilization
    u_proc: float   # per-station utilization


@dataclass(frozen=True)
class ServiceMoments:
    """First two moments of a service-time distribution."""

    mean: float
    second: float
    variance: float
    scv: float      # squared coefficient of variation


@dataclass(frozen=True)
class UtilizationResult:
    value: float
    overloaded: bool


@dataclass(frozen=True)
class CoxianSpec:
    """A Coxian stage chain.

    Stage i has exponential rate mu[i]; on leaving it the job continues
    to stage i+1 with probability a[i] or exits with probability b[i].
    The last stage always exits (a[-1] = 0).
    """

    mu: tuple[float, ...]
    a: tuple[float, ...]
    b: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "mu", tuple(float(m) for m in self.mu))
        object.__setattr__(self, "a", tuple(float(x) for x in self.a))
        object.__setattr__(self, "b", tuple(float(x) for x in self.b))
        n = len(self.mu)
        if n < 1:
            raise ValueError("a Coxian chain needs at least one stage")
        if len(self.a) != n or len(self.b) != n:
            raise ValueError(
                f"mu, a, b must have equal length, got {n}, {len(self.a)}, {len(self.b)}"
            )
        for i, m in enumerate(self.mu):
            if not m > 0.0:
                raise ValueError(f"stage {i + 1} rate must be > 0, got {m}")
        for i, (ai, bi) in enumerate(zip(self.a, self.b)):
            if not 0.0 <= ai <= 1.0:
                raise ValueError(
                    f"stage {i + 1} continue probability must lie in [0, 1], got {ai}"
                )
            if abs(ai + bi - 1.0) > 1e-12:
                raise ValueError(
                    f"stage {i + 1} continue/exit probabilities must sum to 1"
                )
        if self.a[-1] != 0.0:
            raise ValueError("the final stage must exit with certainty (a[-1] = 0)")

    @property
    def stages(self) -> int:
        return len(self.mu)

    @classmethod
    def uniform(cls, mu: float, phi: float, stages: int) -> "CoxianSpec":
        """Equal stage rates mu, equal continue probability phi.

        phi = 1 collapses to an Erlang-stages chain, phi = 0 to a plain
        exponential.
        """
        if isinstance(stages, bool) or not isinstance(stages, int):
            raise ValueError(f"stage count must be an integer, got {stages!r}")
        if stages < 1:
            raise ValueError(f"stage count must be >= 1, got {stages}")
        if not mu > 0.0:
            raise ValueError(f"stage rate must be > 0, got {mu}")
        if not 0.0 <= phi <= 1.0:
            raise ValueError(f"phi must lie in [0, 1], got {phi}")
        a = (phi,) * (stages - 1) + (0.0,)
        b = (1.0 - phi,) * (stages - 1) + (1.0,)
        return cls(mu=(float(mu),) * stages, a=a, b=b)


def sigma_from(config: RepairmanConfig) -> float:
    """Serial fraction implied by the model: D / (D + Z)."""
    return config.d / (config.d + config.z)


def sync_throughput(config: RepairmanConfig) -> float:
    """Throughput bound under fully synchronized demand: p / (p*D + Z).

    Every station queues for repair at once, so one full round takes
    p*D + Z and completes p visits.
    """
    return config.p / (config.p * config.d + config.z)


def sync_capacity(config: RepairmanConfig) -> float:
    """Relative capacity of the synchronized bound.

    Normalizing sync_throughput by its p = 1 value gives
    p / (1 + sigma*(p - 1)) with sigma = D / (D + Z), the Amdahl law.
    """
    sigma = sigma_from(config)
    return config.p / (1.0 + sigma * (config.p - 1))


def sync_response(config: RepairmanConfig) -> float:
    """Repair-center residence time under synchronized demand: p*D."""
    return config.p * config.d


def repairman_exact(config: RepairmanConfig) -> RepairmanSolution:
    """Exact steady-state solution of the closed model (M/M/1//p).

    Mean-value recursion over population n = 1..p:

        R(n) = D * (1 + Q(n - 1))
        X(n) = n / (R(n) + Z)
        Q(n) = X(n) * R(n)

    with Q(0) = 0.  Exponential service and think times are assumed;
    the recursion is exact for this station type.
    """
    q = 0.0
    r = config.d
    x = 0.0
    for n in range(1, config.p + 1):
        r = config.d * (1.0 + q)
        x = n / (r + config.z)
        q = x * r
    return RepairmanSolution(
        x=x,
        r=r,
        q=q,
        u_bus=x * config.d,
        u_proc=x * config.z / config.p,
    )


def coxian_moments(spec: CoxianSpec) -> ServiceMoments:
    """First two moments of a Coxian service time.

    A job exiting after stage i has conditional mean
    M_i = sum_{j<=i} 1/mu_j and conditional second moment
    V_i + M_i**2 with V_i = sum_{j<=i} 1/mu_j**2 (a sum of independent
    exponentials).  Exit probabilities are P_i = b_i * prod_{j<i} a_j,
    with the final stage exiting at probability prod_{j<p} a_j.
    """
    reach = 1.0     # probability of entering stage i
    cum_mean = 0.0  # sum of stage means up to stage i
    cum_var = 0.0   # sum of stage variances up to stage i
    mean = 0.0
    second = 0.0
    last = spec.stages - 1
    for i in range(spec.stages):
        cum_mean += 1.0 / spec.mu[i]
        cum_var += 1.0 / spec.mu[i] ** 2
        exit_p = reach if i == last else reach * spec.b[i]
        mean += exit_p * cum_mean
        second += exit_p * (cum_var + cum_mean * cum_mean)
        reach *= spec.a[i]
    variance = second - mean * mean
    return ServiceMoments(
        mean=mean,
        second=second,
        variance=variance,
        scv=variance / (mean * mean),
    )


def uniform_coxian_mean(mu: float, phi: float, stages: int) -> float:
    """Mean of the uniform Coxian chain in closed form.

    E{S} = (1/mu) * (1 - phi**stages) / (1 - phi), the geometric
    capacity sum scaled by the stage mean.
    """
    if isinstance(stages, bool) or not isinstance(stages, int):
        raise ValueError(f"stage count must be an integer, got {stages!r}")
    if stages < 1:
        raise ValueError(f"stage count must be >= 1, got {stages}")
    if not mu > 0.0:
        raise ValueError(f"stage rate must be > 0, got {mu}")
    if not 0.0 <= phi <= 1.0:
        raise ValueError(f"phi must lie in [0, 1], got {phi}")
    if phi == 1.0:
        return stages / mu
    return (1.0 - phi**stages) / (1.0 - phi) / mu


def uniform_coxian_utilization(
    rate: float, mu: float, phi: float, stages: int
) -> UtilizationResult:
    """Utilization of an M/G/1 queue with uniform Coxian service.

    U = rate * E{S}; with rho = rate/mu this is rho * C(phi, stages),
    the geometric capacity law read as a utilization.  U >= 1 is
    reported, not raised, so callers can see where saturation lands.
    """
    if not rate >= 0.0:
        raise ValueError(f"arrival rate must be >= 0, got {rate}")
    value = rate * uniform_coxian_mean(mu, phi, stages)
    return UtilizationResult(value=value, overloaded=value >= 1.0)


def pk_response(moments: ServiceMoments, utilization: float) -> float:
    """M/G/1 mean response time from the first two service moments.

    R = E{S} * (1 + U*(1 + C2)/(2*(1 - U))) with C2 the squared
    coefficient of variation and U the total utilization.
    """
    if not 0.0 <= utilization < 1.0:
        raise ValueError(
            f"utilization must lie in [0, 1) for a stable queue, got {utilization}"
        )
    return moments.mean * (
        1.0 + utilization * (1.0 + moments.scv) / (2.0 * (1.0 - utilization))
    )


def mpf_response_curve(
    mu: float, phi: float, utilization: float, p_max: int
) -> list[tuple[int, float]]:
    """M/G/1 response time versus stage count at fixed utilization.

    Returns (p, R) pairs for p = 1..p_max, where R is the mean response
    time with p uniform Coxian stages, holding total utilization
    constant (the arrival rate is rescaled as stages are added).  The
    curve rises with p and saturates; more stages at fixed load only
    stretch the service-time tail.
    """
    if not 0.0 < phi < 1.0:
        raise ValueError(f"the response curve needs 0 < phi < 1, got {phi}")
    if not 0.0 < utilization < 1.0:
        raise ValueError(
            f"utilization must lie in (0, 1), got {utilization}"
        )
    if isinstance(p_max, bool) or not isinstance(p_max, int) or p_max < 1:
        raise ValueError(f"stage bound must be a positive integer, got {p_max!r}")
    curve = []
    for p in range(1, p_max + 1):
        moments = coxian_moments(CoxianSpec.uniform(mu, phi, p))
        curve.append((p, pk_response(moments, utilization)))
    return curve


__all__ = [
    "RepairmanConfig",
    "RepairmanSolution",
    "ServiceMoments",
    "UtilizationResult",
    "CoxianSpec",
    "sigma_from",
    "sync_throughput",
    "sync_capacity",
    "sync_response",
    "repairman_exact",
    "coxian_moments",
    "uniform_coxian_mean",
    "uniform_coxian_utilization",
    "pk_response",
    "mpf_response_curve",
]
