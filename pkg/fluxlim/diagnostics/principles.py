"""
Numerical checks of the comparison, maximum, stationarity, propagation,
classical-limit and equilibrium properties of the flux-limited equation.

Every check returns a PrincipleReport. A check whose hypothesis fails on the
given data returns HypothesisNotMet instead of testing its conclusion.
"""

import logging
from typing import List, Optional, Tuple

import numpy as np

from fluxlim.core.interfaces import PrincipleReport, SignClass
from fluxlim.cost import ClassicalQuadraticCost, CostFunction
from fluxlim.geometry import DensityField, l1_distance
from fluxlim.operators import OperatorContext, apply_L
from fluxlim.potential import (
    Potential,
    classify_sign,
    divergence_bounds,
    gibbs_density,
    warn_if_not_confining,
)
from fluxlim.potential.gibbs import SIGN_TOL
from fluxlim.solver import RunConfig, Trajectory, run

logger = logging.getLogger(__name__)

ORDERING_TOL = 1e-8
RESIDUAL_TOL = 1e-3


def trajectory_model(traj: Trajectory) -> Tuple[CostFunction, Potential]:
    """Cost and potential a trajectory was computed with"""
    config = traj.config
    if isinstance(config, RunConfig):
        return config.ctx.cost, config.ctx.potential
    return config.cost, config.potential


def _positive(traj: Trajectory) -> bool:
    return all(np.all(u.values > 0) for _, u in traj.snapshots)


def check_comparison_evolutionary(traj_u: Trajectory, traj_v: Trajectory,
                                  tol: float = ORDERING_TOL) -> PrincipleReport:
    """u <= v on the parabolic boundary implies u <= v everywhere"""
    name = "comparison"
    if not traj_u.grid.same_as(traj_v.grid):
        raise ValueError("mismatched grids")
    if traj_u.times.shape != traj_v.times.shape or not np.allclose(traj_u.times, traj_v.times, rtol=0, atol=1e-12):
        raise ValueError("mismatched snapshot times")

    hypotheses = ["same grid and snapshot times"]
    if not (_positive(traj_u) and _positive(traj_v)):
        return PrincipleReport.hypothesis_not_met(name, hypotheses, tol, "fields are not positive")
    hypotheses.append("u, v > 0")

    initial_gap = float(np.min(traj_v.initial.values - traj_u.initial.values))
    if initial_gap < -tol:
        return PrincipleReport.hypothesis_not_met(
            name, hypotheses, tol, "initial data are not ordered (u0 <= v0 fails)",
            {"initial_margin": initial_gap})
    hypotheses.append("u0 <= v0")

    cfg_u, cfg_v = traj_u.config, traj_v.config
    if isinstance(cfg_u, RunConfig) and isinstance(cfg_v, RunConfig) and not cfg_u.ctx.is_no_flux:
        if cfg_u.ctx.left_value > cfg_v.ctx.left_value or cfg_u.ctx.right_value > cfg_v.ctx.right_value:
            return PrincipleReport.hypothesis_not_met(name, hypotheses, tol,
                                                      "boundary data are not ordered")
        hypotheses.append("ordered boundary data")

    gaps = traj_v.stacked() - traj_u.stacked()
    per_snapshot = np.min(gaps, axis=1)
    margin = float(np.min(per_snapshot))
    return PrincipleReport.evaluate(name, hypotheses, margin, tol, details={
        "initial_margin": initial_gap,
        "margin_trace": per_snapshot.tolist(),
        "times": traj_u.times.tolist(),
    })


def check_weak_max_evolutionary(traj: Trajectory, cost: CostFunction, potential: Potential,
                                tol: float = ORDERING_TOL, kind: str = "max") -> PrincipleReport:
    """Extrema over the space-time cylinder are attained on its parabolic boundary.

    ``kind='max'`` needs div(grad phi*(grad V)) <= 0 and ``kind='min'`` needs it >= 0.
    The parabolic boundary is the t = 0 snapshot together with the two end
    cells at every snapshot time.
    """
    if kind not in ("max", "min"):
        raise ValueError(f"kind must be 'max' or 'min', got {kind}")
    name = f"weak_{kind}"
    grid = traj.grid
    low, high = divergence_bounds(potential, cost, grid)
    sign = classify_sign(potential, cost, grid)
    details = {"divergence_min": low, "divergence_max": high, "sign": sign.value}

    if kind == "max" and high > SIGN_TOL:
        return PrincipleReport.hypothesis_not_met(
            name, [], tol, f"div(grad phi*(grad V)) <= 0 fails (sign {sign.value})", details)
    if kind == "min" and low < -SIGN_TOL:
        return PrincipleReport.hypothesis_not_met(
            name, [], tol, f"div(grad phi*(grad V)) >= 0 fails (sign {sign.value})", details)
    hypotheses = ["div(grad phi*(grad V)) <= 0" if kind == "max" else "div(grad phi*(grad V)) >= 0"]

    if not _positive(traj):
        return PrincipleReport.hypothesis_not_met(name, hypotheses, tol, "trajectory is not positive", details)
    hypotheses.append("u > 0")

    values = traj.stacked()
    boundary = np.concatenate((values[0], values[:, 0], values[:, -1]))
    if kind == "max":
        margin = float(np.max(boundary) - np.max(values))
    else:
        margin = float(np.min(values) - np.min(boundary))
    details.update({"boundary_extremum": float(np.max(boundary) if kind == "max" else np.min(boundary)),
                    "global_extremum": float(np.max(values) if kind == "max" else np.min(values))})
    return PrincipleReport.evaluate(name, hypotheses, margin, tol, details=details)


def check_stationary(u: DensityField, ctx: OperatorContext, tol: float = RESIDUAL_TOL) -> PrincipleReport:
    """max |L u| <= tol"""
    name = "stationary"
    if not np.all(u.values > 0):
        return PrincipleReport.hypothesis_not_met(name, [], tol, "field is not positive")
    residual = float(np.max(np.abs(apply_L(ctx, u))))
    return PrincipleReport.evaluate(name, ["u > 0"], tol - residual, tol, absorbed=True,
                                    details={"residual": residual})


def support_interval(u: DensityField, threshold: float) -> Optional[Tuple[float, float]]:
    """Outer edges of the cells where u exceeds the threshold"""
    above = np.flatnonzero(u.values > threshold)
    if above.size == 0:
        return None
    edges = u.grid.edges
    return float(edges[above[0]]), float(edges[above[-1] + 1])


def mass_outside(u: DensityField, lower: float, upper: float) -> float:
    """Mass of the cells whose centers lie outside [lower, upper]"""
    centers = u.grid.centers
    outside = (centers < lower) | (centers > upper)
    return float(u.grid.dx * np.sum(u.values[outside]))


def check_propagation_speed(traj: Trajectory, threshold: float = 1e-10,
                            slack_cells: float = 5.0) -> PrincipleReport:
    """Support radius grows at most at the cost's speed bound (V = 0 only)"""
    name = "propagation"
    cost, potential = trajectory_model(traj)
    if not cost.is_bounded:
        return PrincipleReport.hypothesis_not_met(name, [], 0.0, "cost has an infinite speed bound")
    hypotheses = [f"bounded cost (speed {cost.speed_bound:g})"]
    if not potential.is_zero:
        return PrincipleReport.hypothesis_not_met(name, hypotheses, 0.0, "potential is not zero")
    hypotheses.append("V = 0")

    grid = traj.grid
    dx = grid.dx
    initial = support_interval(traj.initial, threshold)
    if initial is None:
        return PrincipleReport.hypothesis_not_met(name, hypotheses, 0.0, "initial support is empty")
    center = 0.5 * (initial[0] + initial[1])
    initial_radius = 0.5 * (initial[1] - initial[0])
    speed = cost.speed_bound

    margins, radii, bounds, outside = [], [], [], []
    for t, u in traj.snapshots:
        support = support_interval(u, threshold)
        radius = 0.0 if support is None else max(center - support[0], support[1] - center)
        bound = initial_radius + speed * t + slack_cells * dx
        radii.append(radius)
        outside.append(mass_outside(u, center - bound, center + bound))
        bounds.append(bound)
        margins.append(bound - radius)

    margin = float(min(margins))
    return PrincipleReport.evaluate(name, hypotheses, margin, 0.0, absorbed=True, details={
        "threshold": threshold,
        "initial_radius": initial_radius,
        "times": traj.times.tolist(),
        "radii": radii,
        "bounds": bounds,
        "mass_outside": outside,
        "max_mass_outside": max(outside),
    })


def _limit_config(ctx: OperatorContext, t: float, cfl_factor: float) -> RunConfig:
    return RunConfig(ctx=ctx, t_end=t, cfl_factor=cfl_factor)


def classical_limit_distance(cost: CostFunction, potential: Potential, u0: DensityField, t: float,
                             cfl_factor: float = 0.4, **ctx_options) -> float:
    """L1 distance at time t between runs with ``cost`` and with the classical cost"""
    base = OperatorContext(cost=cost, potential=potential, grid=u0.grid, **ctx_options)
    classical = base.with_options(cost=ClassicalQuadraticCost())
    limited = run(_limit_config(base, t, cfl_factor), u0).final
    reference = run(_limit_config(classical, t, cfl_factor), u0).final
    return l1_distance(limited, reference)


def check_classical_limit(cost_c_large: CostFunction, potential: Potential, u0: DensityField,
                          t: float, tol: float = RESIDUAL_TOL, cfl_factor: float = 0.4,
                          **ctx_options) -> PrincipleReport:
    """A large speed bound reproduces the classical drift-diffusion solution"""
    name = "classical_limit"
    speed = cost_c_large.speed_bound
    hypotheses = [f"c = {speed:g}" + (" (>= 10)" if speed >= 10 else " (below the recommended 10)")]
    if speed < 10:
        logger.warning(f"Classical-limit check with small speed bound c={speed:g}")
    distance = classical_limit_distance(cost_c_large, potential, u0, t, cfl_factor, **ctx_options)
    return PrincipleReport.evaluate(name, hypotheses, tol - distance, tol, absorbed=True,
                                    details={"l1_distance": distance, "t": t, "c": speed})


def classical_limit_trend(costs: List[CostFunction], potential: Potential, u0: DensityField,
                          t: float, cfl_factor: float = 0.4, **ctx_options) -> dict:
    """Distances to the classical run for increasing speed bounds"""
    speeds = [cost.speed_bound for cost in costs]
    distances = [classical_limit_distance(cost, potential, u0, t, cfl_factor, **ctx_options)
                 for cost in costs]
    order = np.argsort(speeds)
    ordered = [distances[i] for i in order]
    return {
        "speeds": [speeds[i] for i in order],
        "distances": ordered,
        "monotone": bool(all(b < a for a, b in zip(ordered, ordered[1:]))),
    }


def check_gibbs_convergence(traj: Trajectory, potential: Potential, tol: float = 1e-2) -> PrincipleReport:
    """The final snapshot approaches the Gibbs density"""
    name = "gibbs_convergence"
    config = traj.config
    if isinstance(config, RunConfig) and not config.ctx.is_no_flux:
        return PrincipleReport.hypothesis_not_met(name, [], tol, "boundary is not no-flux")
    hypotheses = ["no-flux boundary"]
    grid = traj.grid
    if warn_if_not_confining(potential, grid):
        hypotheses.append("confining potential")

    gibbs = gibbs_density(potential, grid)
    scale = traj.initial.mass
    target = DensityField(grid, gibbs.values * scale)
    distances = [l1_distance(u, target) for _, u in traj.snapshots]
    times = traj.times
    settled = times >= times[0] + 0.1 * (times[-1] - times[0])
    tail = np.asarray(distances)[settled]
    nonincreasing = bool(np.all(np.diff(tail) <= 1e-12)) if tail.size > 1 else True
    final = distances[-1]
    return PrincipleReport.evaluate(name, hypotheses, tol - final, tol, absorbed=True, details={
        "final_distance": final,
        "distance_trace": distances,
        "times": times.tolist(),
        "nonincreasing_after_transient": nonincreasing,
    })


def constant_is_subsolution(sign: SignClass) -> Optional[bool]:
    """Whether constants satisfy Qw >= 0 (True), Qw <= 0 (False) or neither (None)"""
    if sign == SignClass.NON_NEGATIVE:
        return True
    if sign == SignClass.NON_POSITIVE:
        return False
    return None
