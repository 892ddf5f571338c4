"""Delayed case isolation in heterogeneous SIR populations."""

from ._isodelay import (
    DegreeDistribution,
    DegreeStats,
    DomainError,
    EpidemicParams,
    HeterogeneityMode,
    IntegrationError,
    NumericalError,
    StabilityVerdict,
    VerdictKind,
    __version__,
    classify_delay,
    compute_stats,
    degree_proportional_alpha,
    effective_beta,
    estimate_growth_rate,
    generate_graph_stats,
    heterogeneous_delay_bound,
    homogeneous_delay_bound,
    integrate_homogeneous,
    integrate_reduced,
    lambert_w,
    max_cv,
    reproduction_numbers,
    rightmost_root,
    run_ensemble,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
