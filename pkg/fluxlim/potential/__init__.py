"""
External potentials and equilibria
"""

from .potentials import (
    Potential,
    ZeroPotential,
    QuadraticPotential,
    DoubleWellPotential,
    PolynomialPotential,
    parse_potential,
)
from .gibbs import (
    gibbs_density,
    force_flux_divergence,
    divergence_bounds,
    classify_sign,
    is_confining,
    is_convex_on,
    warn_if_not_confining,
)

__all__ = [
    'Potential',
    'ZeroPotential',
    'QuadraticPotential',
    'DoubleWellPotential',
    'PolynomialPotential',
    'parse_potential',
    'gibbs_density',
    'force_flux_divergence',
    'divergence_bounds',
    'classify_sign',
    'is_confining',
    'is_convex_on',
    'warn_if_not_confining',
]
