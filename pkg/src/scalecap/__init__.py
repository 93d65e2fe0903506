"""scalecap: multiprocessor scaling laws with queueing teeth.

Evaluate and fit the Amdahl, geometric (MPF) and USL capacity models,
relate them to their queueing interpretations (machine repairman,
M/G/1 with uniform Coxian service), and cross-check everything against
a discrete-event simulator.
"""

__version__ = "0.1.0"

from .fitting import (
    BenchmarkSeries,
    Divergence,
    FitReport,
    ModelComparison,
    PointFit,
    Prediction,
    SkippedFit,
    compare_models,
    fit_amdahl,
    fit_geometric,
    fit_usl,
    normalize,
)
from .ingest import parse_benchmark_csv, read_benchmark_csv
from .laws import (
    Amdahl,
    Asymptote,
    CapacityPoint,
    Geometric,
    ScalingParams,
    Usl,
    amdahl_capacity,
    amdahl_scaleup,
    amdahl_series_terms,
    asymptote,
    capacity,
    capacity_table,
    geometric_capacity,
    match_asymptotic,
    match_leading,
    usl_capacity,
    usl_peak,
)
from .queueing import (
    CoxianSpec,
    RepairmanConfig,
    RepairmanSolution,
    ServiceMoments,
    UtilizationResult,
    coxian_moments,
    mpf_response_curve,
    pk_response,
    repairman_exact,
    sigma_from,
    sync_capacity,
    sync_response,
    sync_throughput,
    uniform_coxian_mean,
    uniform_coxian_utilization,
)
from .simulate import (
    Mg1SimResult,
    RepairmanSimResult,
    SimConfig,
    SimEstimate,
    batch_means,
    sample_coxian_service,
    sample_coxian_services,
    simulate_mg1_coxian,
    simulate_repairman,
)
