"""Differentially private counting and averaging under continual release.

Explicit lower-triangular factorizations of the prefix-sum and running-mean
workloads, Gaussian noise calibration, the binary-tree baseline, derived
mechanisms (histograms, synthetic graphs, graph functions, pattern counts,
a non-interactive local median learner), and a seeded benchmark harness.
"""
from .bench import (
    ErrorTrace,
    ExperimentConfig,
    ExperimentResult,
    bounds_table,
    emit_csv,
    read_graph_updates,
    run_experiment,
    uniform_absolute_risk,
)
from .factors import (
    BoundReport,
    FactorCoeffs,
    LowerTriFactor,
    averaging_factor,
    averaging_norm_bound,
    counting_factor,
    counting_norm_bound,
    factor_coeff,
    mathias_bounds,
    partial_zeta_bounds,
    prefix_sum_workload,
    reconstruct_product,
    row_col_norms,
    running_mean_workload,
)
from .graphs import (
    DegreeProvider,
    EdgeCountProvider,
    GraphFunctionEstimator,
    GraphStream,
    SyntheticGraph,
    cut_error_bound,
    edge_slots,
)
from .localdp import (
    AggregateEstimate,
    ClientMessage,
    Grid,
    beta_bound,
    client_encode,
    median_risk_bound,
    risk_curve,
    server_aggregate,
)
from .mechanisms import AverageState, BinaryTreeState, CounterState, HistogramState
from .patterns import (
    EpisodeCounterState,
    SubstringCounterState,
    episode_error_bound,
    pattern_queries,
    substring_error_bound,
)
from .privacy import (
    NoisePlan,
    PrivacyBudget,
    averaging_bound_curve,
    counting_bound_curve,
    error_bound_average,
    error_bound_counting,
    gaussian_constant,
    noise_scale,
    sample_noise,
)

__version__ = "0.1.0"

__all__ = [
    "AggregateEstimate",
    "AverageState",
    "BinaryTreeState",
    "BoundReport",
    "ClientMessage",
    "CounterState",
    "DegreeProvider",
    "EdgeCountProvider",
    "EpisodeCounterState",
    "ErrorTrace",
    "ExperimentConfig",
    "ExperimentResult",
    "FactorCoeffs",
    "GraphFunctionEstimator",
    "GraphStream",
    "Grid",
    "HistogramState",
    "LowerTriFactor",
    "NoisePlan",
    "PrivacyBudget",
    "SubstringCounterState",
    "SyntheticGraph",
    "averaging_bound_curve",
    "averaging_factor",
    "averaging_norm_bound",
    "beta_bound",
    "bounds_table",
    "client_encode",
    "counting_bound_curve",
    "counting_factor",
    "counting_norm_bound",
    "cut_error_bound",
    "edge_slots",
    "emit_csv",
    "episode_error_bound",
    "error_bound_average",
    "error_bound_counting",
    "factor_coeff",
    "gaussian_constant",
    "mathias_bounds",
    "median_risk_bound",
    "noise_scale",
    "partial_zeta_bounds",
    "pattern_queries",
    "prefix_sum_workload",
    "read_graph_updates",
    "reconstruct_product",
    "risk_curve",
    "row_col_norms",
    "run_experiment",
    "running_mean_workload",
    "sample_noise",
    "server_aggregate",
    "substring_error_bound",
    "uniform_absolute_risk",
]
