"""
Discrete operators L and Q
"""

from .context import OperatorContext
from .discrete import (
    InterfaceState,
    interface_state,
    apply_L,
    apply_Q,
    boundary_flux_balance,
    quasilinear_coefficients,
    check_LQ_identity,
    ellipticity_samples,
    limited_density,
    superbee,
)

__all__ = [
    'OperatorContext',
    'InterfaceState',
    'interface_state',
    'apply_L',
    'apply_Q',
    'boundary_flux_balance',
    'quasilinear_coefficients',
    'check_LQ_identity',
    'ellipticity_samples',
    'limited_density',
    'superbee',
]
