"""
Forward Euler integration of du/dt = Lu
"""

import logging
import math
from typing import Union

import numpy as np
from scipy.special import xlogy

from fluxlim.core.errors import BlowUpError, StiffnessCollapseError
from fluxlim.core.interfaces import FluxMode
from fluxlim.geometry import DensityField, mass
from fluxlim.operators import OperatorContext, InterfaceState, interface_state
from .trajectory import RunConfig, StepRecord, Trajectory

logger = logging.getLogger(__name__)

DT_UNDERFLOW = 1e-15
INJECTION_BUDGET = 1e-10


def _step_bound(ctx: OperatorContext, state: InterfaceState, cfl_factor: float) -> float:
    dx = ctx.grid.dx
    cost = ctx.cost
    if ctx.flux_mode == FluxMode.COMBINED:
        curvature = cost.hess_1d(state.force_gradient + state.log_gradient)
    else:
        curvature = np.concatenate((cost.hess_1d(state.force_gradient),
                                    cost.hess_1d(state.log_gradient)))
    lam_max = float(np.max(curvature)) if curvature.size else 0.0
    v_max = state.max_speed
    dt_hyp = dx / v_max if v_max > 0 else math.inf
    dt_par = dx ** 2 / (2.0 * lam_max) if lam_max > 0 else math.inf
    return cfl_factor * min(dt_hyp, dt_par)


def stable_dt(ctx: OperatorContext, u: Union[DensityField, np.ndarray], cfl_factor: float = 0.4) -> float:
    """cfl * min(dx / v_max, dx^2 / (2 lambda_max)) over the interfaces of u"""
    if not 0 < cfl_factor <= 1:
        raise ValueError(f"cfl_factor must lie in (0, 1], got {cfl_factor}")
    return _step_bound(ctx, interface_state(ctx, u), cfl_factor)


def free_energy(ctx: OperatorContext, u: Union[DensityField, np.ndarray]) -> float:
    """dx * sum(u log u - u + V u), with 0 log 0 = 0"""
    values = u.values if isinstance(u, DensityField) else np.asarray(u, dtype=float)
    potential = ctx.potential.value(ctx.grid.centers)
    return float(ctx.grid.dx * np.sum(xlogy(values, values) - values + potential * values))


def run(config: RunConfig, u0: DensityField) -> Trajectory:
    """Integrate from u0 to t_end, landing exactly on every snapshot time"""
    ctx = config.ctx
    grid = ctx.grid
    dx = grid.dx
    if not u0.grid.same_as(grid):
        raise ValueError("mismatched grids")
    initial_mass = mass(u0)
    if not initial_mass > 0:
        raise ValueError("empty density")

    floor = config.positivity_floor
    u = np.array(u0.values, dtype=float)
    injected = float(dx * np.sum(np.clip(floor - u, 0.0, None)))
    u = np.maximum(u, floor)

    targets = config.output_times()
    trajectory = Trajectory(config, integrator="fv")
    trajectory.add_snapshot(0.0, DensityField(grid, u))

    logger.info(f"Starting fv run: t_end={config.t_end}, n_cells={grid.n_cells}, "
                f"cost={ctx.cost.name}, potential={ctx.potential.spec()}, mode={ctx.flux_mode.value}")

    t = 0.0
    step = 0
    max_drift = 0.0
    landing_tol = 1e-12 * config.t_end
    next_index = 1

    while next_index < len(targets):
        target = targets[next_index]
        state = interface_state(ctx, u)
        dt = _step_bound(ctx, state, config.cfl_factor)
        if dt < DT_UNDERFLOW:
            raise StiffnessCollapseError(t, dt)
        landing = t + dt >= target - landing_tol
        if landing:
            dt = target - t

        rate = -np.diff(state.fluxes) / dx
        updated = u + dt * rate
        if not np.all(np.isfinite(updated)):
            raise BlowUpError(t + dt, DensityField(grid, u))

        if ctx.is_no_flux:
            before = np.sum(u)
            max_drift = max(max_drift, abs(np.sum(updated) - before) / before)

        step_injection = float(dx * np.sum(np.clip(floor - updated, 0.0, None)))
        injected += step_injection
        u = np.maximum(updated, floor)
        t = target if landing else t + dt
        step += 1

        final_step = landing and next_index == len(targets) - 1
        if step % config.log_every == 0 or final_step:
            trajectory.step_log.append(StepRecord(
                step=step, t=t, dt=dt, mass=float(dx * np.sum(u)),
                min_density=float(np.min(u)), max_density=float(np.max(u)),
                free_energy=free_energy(ctx, u), injected=step_injection,
            ))
        if landing:
            trajectory.add_snapshot(target, DensityField(grid, u))
            logger.debug(f"Snapshot at t={target:.6g} after {step} steps")
            next_index += 1

    injected_fraction = injected / initial_mass
    if injected_fraction > INJECTION_BUDGET:
        logger.warning(f"Positivity flooring injected {injected:.3e} mass "
                       f"({injected_fraction:.3e} of the total)")
    else:
        logger.info(f"Positivity flooring injected {injected:.3e} mass")

    trajectory.metadata.update({
        "integrator": "fv",
        "steps": step,
        "max_relative_mass_drift": max_drift,
        "injected_mass": injected,
        "injected_fraction": injected_fraction,
        "initial_mass": initial_mass,
    })
    logger.info(f"Finished fv run: {step} steps, max mass drift {max_drift:.2e}")
    return trajectory
