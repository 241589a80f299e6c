"""Poisson-binomial laws, distances to the matched Poisson law, and bound checks."""

from ._core import (
    DomainError,
    EscalationError,
    InputError,
    ResolutionError,
    bound_catalog,
    bv_limit_check,
    degenerate_asymptotics,
    divergence_report,
    evaluate_bounds,
    family,
    log_pmf,
    moments,
    pmf,
    poisson_pmf,
    solve_saddle,
    sweep,
)

__version__ = "0.1.0"
