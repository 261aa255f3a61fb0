"""
Property suite for cost functions over seeded random samples
"""

import logging
import math
from typing import Optional

import numpy as np

from fluxlim.core.interfaces import PrincipleReport
from fluxlim.cost import (
    CostFunction,
    RelativisticCost,
    TabulatedRadialCost,
    numerical_conjugate,
    relativistic_profile,
    vector_norm,
)

logger = logging.getLogger(__name__)

FD_TOL = 1e-6
LEGENDRE_TOL = 1e-6
LEGENDRE_CUT = 0.98
# dual radii, in units of the speed bound, where the flux must have saturated
FAR_RADII = (1e50, 1e200)
SATURATION_TOL = 1e-15
FAR_FIELD_TOL = 1e-14


def sample_vectors(rng: np.random.Generator, n_samples: int, scale: float = 1.0) -> list:
    """Random vectors in dimensions 1 to 3 with log-uniform norms in [1e-3, 1e2] * scale"""
    vectors = []
    for _ in range(n_samples):
        d = int(rng.integers(1, 4))
        direction = rng.normal(size=d)
        direction /= np.linalg.norm(direction)
        vectors.append(direction * scale * 10.0 ** rng.uniform(-3.0, 2.0))
    return vectors


def _fd_errors(cost: CostFunction, z: np.ndarray) -> tuple:
    step = 1e-5 * max(1.0, float(np.linalg.norm(z)))
    d = z.size
    grad = cost.dual_grad(z)
    hess = cost.dual_hess(z)
    grad_fd = np.empty(d)
    hess_fd = np.empty((d, d))
    for k in range(d):
        e = np.zeros(d)
        e[k] = step
        grad_fd[k] = (cost.dual_value(z + e) - cost.dual_value(z - e)) / (2 * step)
        hess_fd[:, k] = (cost.dual_grad(z + e) - cost.dual_grad(z - e)) / (2 * step)
    grad_error = float(np.max(np.abs(grad - grad_fd)) / (1.0 + np.max(np.abs(grad))))
    hess_error = float(np.max(np.abs(hess - hess_fd)) / (1.0 + np.max(np.abs(hess))))
    return grad_error, hess_error


def legendre_error(cost: CostFunction, rng: np.random.Generator, n_samples: int,
                   samples: int = 10_000) -> Optional[float]:
    """Numerical Legendre transform against the closed form (or the table against its oracle)"""
    if isinstance(cost, RelativisticCost):
        r, phi = relativistic_profile(cost.c, samples)
        s_cut = float(cost.primal_slope(LEGENDRE_CUT * cost.c))
        s = rng.uniform(0.0, s_cut, size=n_samples)
        numeric = np.concatenate([numerical_conjugate(r, phi, chunk) for chunk in np.array_split(s, 10)])
        return float(np.max(np.abs(numeric - cost.radial_value(s))))
    if isinstance(cost, TabulatedRadialCost):
        s = rng.uniform(0.0, cost.s_max, size=n_samples)
        numeric = np.concatenate([np.atleast_1d(cost.direct_conjugate(chunk))
                                  for chunk in np.array_split(s, 10)])
        return float(np.max(np.abs(numeric - cost.radial_value(s))))
    return None


def far_field_shortfall(cost: CostFunction, rng: np.random.Generator) -> float:
    """Distance of |grad phi*|/c from [1 - 1e-14, 1 - 1e-15] at huge dual radii, 0 inside"""
    c = cost.speed_bound
    shortfall = 0.0
    for radius in FAR_RADII:
        for d in (1, 2, 3):
            direction = rng.normal(size=d)
            z = radius * c * direction / np.linalg.norm(direction)
            speed = vector_norm(cost.dual_grad(z)) / c
            if not (np.isfinite(speed) and math.isfinite(cost.dual_value(z))):
                return math.inf
            shortfall = max(shortfall, 1.0 - FAR_FIELD_TOL - speed, speed - (1.0 - SATURATION_TOL))
    return shortfall


def check_cost_properties(cost: CostFunction, n_samples: int = 1000, seed: int = 0,
                          tol: float = FD_TOL) -> PrincipleReport:
    """Oddness, monotonicity, SPD Hessians, derivative consistency, speed saturation, Legendre agreement"""
    name = "cost_properties"
    rng = np.random.default_rng(seed)
    scale = cost.speed_bound if cost.is_bounded else 1.0
    vectors = sample_vectors(rng, n_samples, scale)

    odd = monotone = spd = grad_fd = hess_fd = saturation = 0.0
    for z in vectors:
        g = cost.dual_grad(z)
        odd = max(odd, float(np.max(np.abs(cost.dual_grad(-z) + g))))
        y = z + rng.normal(size=z.size) * scale
        pairing = float((cost.dual_grad(y) - g) @ (y - z))
        monotone = max(monotone, -pairing)
        spd = max(spd, -float(np.min(np.linalg.eigvalsh(cost.dual_hess(z)))))
        ge, he = _fd_errors(cost, z)
        grad_fd = max(grad_fd, ge)
        hess_fd = max(hess_fd, he)
        if cost.is_bounded:
            saturation = max(saturation, vector_norm(g) / cost.speed_bound - (1.0 - SATURATION_TOL))
    shortfall = far_field_shortfall(cost, rng) if cost.is_bounded else 0.0

    legendre = legendre_error(cost, rng, min(n_samples, 1000))
    violations = {
        "oddness": odd,
        "monotonicity": monotone,
        "spd": spd,
        "gradient_fd": grad_fd,
        "hessian_fd": hess_fd,
        "speed_bound": saturation,
        "far_field_saturation": shortfall,
    }
    margin = min(tol - odd, tol - monotone, -spd, tol - grad_fd, tol - hess_fd, -saturation, -shortfall)
    if legendre is not None:
        violations["legendre"] = legendre
        margin = min(margin, LEGENDRE_TOL - legendre)
    logger.debug(f"Cost property violations for {cost.name}: {violations}")
    return PrincipleReport.evaluate(name, [f"{n_samples} samples, seed {seed}"], margin, tol,
                                    absorbed=True, details=violations)
