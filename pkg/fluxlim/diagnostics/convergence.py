"""
Resolution studies of the stationary residual
"""

import math
from typing import Sequence

import numpy as np

from fluxlim.core.interfaces import PrincipleReport
from fluxlim.geometry import Grid1D
from fluxlim.operators import OperatorContext, apply_L
from fluxlim.potential import gibbs_density
from .structure import observed_ratios


def gibbs_residuals(ctx: OperatorContext, resolutions: Sequence[int]) -> list:
    """max |L gibbs| on refinements of the context grid"""
    grid = ctx.grid
    residuals = []
    for n in resolutions:
        refined = Grid1D(grid.x_min, grid.x_max, int(n))
        refined_ctx = ctx.with_options(grid=refined)
        gibbs = gibbs_density(ctx.potential, refined)
        residuals.append(float(np.max(np.abs(apply_L(refined_ctx, gibbs)))))
    return residuals


def check_stationary_order(ctx: OperatorContext, resolutions: Sequence[int] = (200, 400, 800),
                           min_order: float = 1.5) -> PrincipleReport:
    """Gibbs residual decays at least at ``min_order`` under halving of dx.

    Pairs whose residuals are both at rounding level count as converged.
    """
    name = "stationary_order"
    resolutions = sorted(int(n) for n in resolutions)
    residuals = gibbs_residuals(ctx, resolutions)
    orders = []
    for ratio, coarse, fine in zip(observed_ratios(residuals), resolutions, resolutions[1:]):
        orders.append(None if ratio is None else math.log(ratio) / math.log(fine / coarse))
    measured = [order for order in orders if order is not None]
    margin = min(measured) - min_order if measured else 0.0
    return PrincipleReport.evaluate(name, ["Gibbs state of a smooth potential"], margin, 0.0,
                                    absorbed=True, details={
                                        "resolutions": resolutions,
                                        "residuals": residuals,
                                        "orders": orders,
                                        "min_order": min_order,
                                    })
