"""
Gibbs equilibria and the force-flux divergence div(grad phi*(grad V))
"""

import logging
from typing import Tuple

import numpy as np

from fluxlim.core.interfaces import SignClass
from fluxlim.cost import CostFunction
from fluxlim.geometry import DensityField, Grid1D
from .potentials import Potential

logger = logging.getLogger(__name__)

SIGN_TOL = 1e-12


def gibbs_density(potential: Potential, grid: Grid1D) -> DensityField:
    """C exp(-V) normalized to unit mass under the grid's midpoint rule"""
    v = potential.value(grid.centers)
    weights = np.exp(-(v - np.min(v)))
    return DensityField(grid, weights / (grid.dx * np.sum(weights)))


def force_flux_divergence(potential: Potential, cost: CostFunction, x) -> np.ndarray:
    """(phi*)''(V'(x)) V''(x) in 1-D"""
    x = np.asarray(x, dtype=float)
    return cost.hess_1d(potential.grad(x)) * potential.hess(x)


def divergence_bounds(potential: Potential, cost: CostFunction, grid: Grid1D) -> Tuple[float, float]:
    """Minimum and maximum of the force-flux divergence over cell centers"""
    values = force_flux_divergence(potential, cost, grid.centers)
    return float(np.min(values)), float(np.max(values))


def classify_sign(potential: Potential, cost: CostFunction, grid: Grid1D) -> SignClass:
    """Sign class of div(grad phi*(grad V)); an identically zero field is NonNegative"""
    low, high = divergence_bounds(potential, cost, grid)
    if low >= -SIGN_TOL:
        return SignClass.NON_NEGATIVE
    if high <= SIGN_TOL:
        return SignClass.NON_POSITIVE
    return SignClass.MIXED


def is_confining(potential: Potential, grid: Grid1D) -> bool:
    """Whether V grows toward both grid ends"""
    slopes = potential.grad(np.array([grid.x_min, grid.x_max]))
    return bool(slopes[0] < 0 and slopes[1] > 0)


def is_convex_on(potential: Potential, grid: Grid1D) -> bool:
    return bool(np.all(potential.hess(grid.centers) >= -SIGN_TOL))


def warn_if_not_confining(potential: Potential, grid: Grid1D) -> bool:
    confining = is_confining(potential, grid)
    if not confining and not potential.is_zero:
        logger.warning(f"Potential {potential.spec()} does not grow toward both ends of "
                       f"[{grid.x_min}, {grid.x_max}]; equilibrium mass concentrates at the boundary")
    return confining
