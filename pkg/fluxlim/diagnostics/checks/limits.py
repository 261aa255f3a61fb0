"""
Checks that compare against a second model: the classical cost and the JKO scheme
"""

from fluxlim.core.interfaces import FluxMode, PrincipleReport
from fluxlim.cost import RelativisticCost
from ..cost_suite import check_cost_properties
from ..principles import RESIDUAL_TOL, check_classical_limit, classical_limit_trend
from ..structure import check_jko_cross_validation
from .base import CheckContext, PrincipleCheck


class ClassicalLimitCheck(PrincipleCheck):
    """Relativistic cost with a large c against the classical cost, same data"""

    name = "classical_limit"
    default_tolerance = RESIDUAL_TOL
    PARAMS = {"c": 100.0, "t": None, "trend": None}

    def check(self, context: CheckContext) -> PrincipleReport:
        t = self.params["t"] if self.params["t"] is not None else context.run_config.t_end
        options = {"boundary": context.ctx.boundary, "left_value": context.ctx.left_value,
                   "right_value": context.ctx.right_value, "flux_mode": context.ctx.flux_mode,
                   "interface_density": context.ctx.interface_density}
        report = check_classical_limit(RelativisticCost(float(self.params["c"])), context.ctx.potential,
                                       context.u0, float(t), self.tolerance,
                                       context.run_config.cfl_factor, **options)
        if self.params["trend"]:
            costs = [RelativisticCost(float(c)) for c in self.params["trend"]]
            report.details["trend"] = classical_limit_trend(costs, context.ctx.potential, context.u0,
                                                            float(t), context.run_config.cfl_factor,
                                                            **options)
        return report


class JkoCrossValidationCheck(PrincipleCheck):
    name = "jko_cross_validation"
    default_tolerance = 5e-2

    def check(self, context: CheckContext) -> PrincipleReport:
        jko = context.jko_trajectory()
        if jko is None:
            return PrincipleReport.hypothesis_not_met(self.name, [], self.tolerance,
                                                      "no JKO parameters configured")
        t_end = jko.final_time
        combined = context.fv_trajectory(FluxMode.COMBINED, t_end)
        separate = context.fv_trajectory(FluxMode.SEPARATE, t_end)
        return check_jko_cross_validation(jko, combined, separate, self.tolerance)


class CostPropertiesCheck(PrincipleCheck):
    name = "cost_properties"
    default_tolerance = 1e-6
    PARAMS = {"n_samples": 1000, "seed": None}

    def check(self, context: CheckContext) -> PrincipleReport:
        seed = context.seed if self.params["seed"] is None else int(self.params["seed"])
        return check_cost_properties(context.ctx.cost, int(self.params["n_samples"]), seed, self.tolerance)
