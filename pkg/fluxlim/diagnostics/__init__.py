"""
Numerical verification of comparison, maximum, stationarity and limit properties
"""

from .principles import (
    check_comparison_evolutionary,
    check_weak_max_evolutionary,
    check_stationary,
    check_propagation_speed,
    check_classical_limit,
    check_gibbs_convergence,
    classical_limit_distance,
    classical_limit_trend,
    mass_outside,
    support_interval,
    trajectory_model,
)
from .structure import (
    check_lq_identity,
    check_constant_state,
    check_ellipticity,
    check_lyapunov,
    check_conservation,
    check_jko_cross_validation,
    lq_mismatches,
    observed_ratios,
)
from .convergence import check_stationary_order, gibbs_residuals
from .cost_suite import check_cost_properties
from .checks import CHECKS, CheckContext, PrincipleCheck, create_check
from .engine import VerificationEngine

__all__ = [
    'check_comparison_evolutionary',
    'check_weak_max_evolutionary',
    'check_stationary',
    'check_propagation_speed',
    'check_classical_limit',
    'check_gibbs_convergence',
    'classical_limit_distance',
    'classical_limit_trend',
    'mass_outside',
    'support_interval',
    'trajectory_model',
    'check_lq_identity',
    'check_constant_state',
    'check_ellipticity',
    'check_lyapunov',
    'check_conservation',
    'check_jko_cross_validation',
    'lq_mismatches',
    'observed_ratios',
    'check_stationary_order',
    'gibbs_residuals',
    'check_cost_properties',
    'CHECKS',
    'CheckContext',
    'PrincipleCheck',
    'create_check',
    'VerificationEngine',
]
