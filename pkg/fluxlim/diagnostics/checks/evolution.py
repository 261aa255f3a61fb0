"""
Checks on time-dependent runs
"""

from fluxlim.core.interfaces import PrincipleReport
from fluxlim.geometry import DensityField
from ..principles import (
    check_comparison_evolutionary,
    check_gibbs_convergence,
    check_propagation_speed,
    check_weak_max_evolutionary,
)
from ..structure import check_conservation, check_ellipticity, check_lyapunov
from .base import CheckContext, PrincipleCheck


class ComparisonCheck(PrincipleCheck):
    """Runs u0 and u0 + offset and checks the order is kept"""

    name = "comparison"
    PARAMS = {"offset": 0.1}

    def check(self, context: CheckContext) -> PrincipleReport:
        lower = context.fv_trajectory()
        shifted = context.u0.values + float(self.params["offset"])
        if shifted.min() < 0:
            shifted = shifted.clip(min=0.0)
        upper = context.rerun(u0=DensityField(context.u0.grid, shifted))
        return check_comparison_evolutionary(lower, upper, self.tolerance)


class WeakMaxCheck(PrincipleCheck):
    name = "weak_max"
    PARAMS = {"kind": "max"}

    def check(self, context: CheckContext) -> PrincipleReport:
        return check_weak_max_evolutionary(context.fv_trajectory(), context.ctx.cost,
                                           context.ctx.potential, self.tolerance,
                                           kind=self.params["kind"])


class PropagationCheck(PrincipleCheck):
    name = "propagation"
    default_tolerance = 0.0
    PARAMS = {"threshold": 1e-10, "slack_cells": 5.0}

    def check(self, context: CheckContext) -> PrincipleReport:
        return check_propagation_speed(context.primary(), float(self.params["threshold"]),
                                       float(self.params["slack_cells"]))


class GibbsConvergenceCheck(PrincipleCheck):
    name = "gibbs_convergence"
    default_tolerance = 1e-2

    def check(self, context: CheckContext) -> PrincipleReport:
        return check_gibbs_convergence(context.primary(), context.ctx.potential, self.tolerance)


class LyapunovCheck(PrincipleCheck):
    """Free energy decay; per unit time for fv runs, per step for JKO runs"""

    name = "lyapunov"
    default_tolerance = None

    def check(self, context: CheckContext) -> PrincipleReport:
        return check_lyapunov(context.primary(), self.tolerance)


class ConservationCheck(PrincipleCheck):
    name = "conservation"
    default_tolerance = 1e-12

    def check(self, context: CheckContext) -> PrincipleReport:
        return check_conservation(context.primary(), drift_tol=self.tolerance)


class EllipticityCheck(PrincipleCheck):
    name = "ellipticity"
    default_tolerance = 0.0

    def check(self, context: CheckContext) -> PrincipleReport:
        return check_ellipticity(context.fv_trajectory())
