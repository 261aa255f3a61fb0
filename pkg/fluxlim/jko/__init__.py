"""
Variational (JKO) time stepping in quantile coordinates
"""

from .scheme import (
    JkoConfig,
    JkoStepResult,
    JkoRunStats,
    MIN_QUANTILES,
    quantile_free_energy,
    transport_cost,
    jko_objective,
    jko_gradient,
    jko_hessian_banded,
    solve_jko_step,
    jko_step,
    jko_run,
)

__all__ = [
    'JkoConfig',
    'JkoStepResult',
    'JkoRunStats',
    'MIN_QUANTILES',
    'quantile_free_energy',
    'transport_cost',
    'jko_objective',
    'jko_gradient',
    'jko_hessian_banded',
    'solve_jko_step',
    'jko_step',
    'jko_run',
]
