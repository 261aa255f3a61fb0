"""
Checks on stationary states and on the operators themselves
"""

import numpy as np

from fluxlim.core.interfaces import PrincipleReport
from fluxlim.potential import gibbs_density
from ..convergence import check_stationary_order
from ..principles import RESIDUAL_TOL, check_stationary
from ..structure import check_constant_state, check_lq_identity
from .base import CheckContext, PrincipleCheck


class StationaryCheck(PrincipleCheck):
    """max |L u| for the Gibbs density (``field: gibbs``) or the initial data"""

    name = "stationary"
    default_tolerance = RESIDUAL_TOL
    PARAMS = {"field": "gibbs"}

    def check(self, context: CheckContext) -> PrincipleReport:
        which = self.params["field"]
        if which == "gibbs":
            u = gibbs_density(context.ctx.potential, context.ctx.grid)
        elif which == "initial":
            u = context.u0
        else:
            raise ValueError(f"unknown stationary field '{which}'")
        return check_stationary(u, context.ctx, self.tolerance)


class StationaryOrderCheck(PrincipleCheck):
    name = "stationary_order"
    default_tolerance = 0.0
    PARAMS = {"resolutions": [200, 400, 800], "min_order": 1.5}

    def check(self, context: CheckContext) -> PrincipleReport:
        return check_stationary_order(context.ctx, self.params["resolutions"],
                                      float(self.params["min_order"]))


def smooth_bump(x: np.ndarray) -> np.ndarray:
    return 1.0 + 0.5 * np.exp(-x ** 2)


class LQIdentityCheck(PrincipleCheck):
    """Mismatch between L u and u Q(log u), optionally at several resolutions"""

    name = "lq_identity"
    default_tolerance = RESIDUAL_TOL
    PARAMS = {"profile": "bump", "resolutions": None, "min_ratio": 3.0}

    def check(self, context: CheckContext) -> PrincipleReport:
        which = self.params["profile"]
        if which == "bump":
            profile = smooth_bump
        elif which == "gibbs":
            potential = context.ctx.potential

            def profile(x):
                v = potential.value(x)
                return np.exp(-(v - np.min(v)))
        else:
            raise ValueError(f"unknown lq_identity profile '{which}'")
        return check_lq_identity(context.ctx, profile, self.tolerance,
                                 self.params["resolutions"], float(self.params["min_ratio"]))


class ConstantStateCheck(PrincipleCheck):
    name = "constant_state"
    default_tolerance = 1e-12
    PARAMS = {"levels": [-2.0, 0.0, 3.0]}

    def check(self, context: CheckContext) -> PrincipleReport:
        return check_constant_state(context.ctx, self.params["levels"], self.tolerance)
