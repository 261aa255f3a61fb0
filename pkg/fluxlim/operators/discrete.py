"""
Finite-volume evaluation of L and finite-difference evaluation of Q.

L u = d/dx[u g(V')] + d/dx[u g((log u)')]          with g = (phi*)'
Q w = f''(w') w'' + w' g(w') + w' g(V') + f''(V') V''   with f'' = (phi*)''

and L u = u Q(log u) for smooth positive u.
"""

import logging
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from fluxlim.core.errors import NonFiniteFieldError
from fluxlim.core.interfaces import FluxMode, InterfaceDensity
from fluxlim.geometry import DensityField
from .context import OperatorContext

logger = logging.getLogger(__name__)

FieldLike = Union[DensityField, np.ndarray]


@dataclass
class InterfaceState:
    """Interface quantities of one evaluation of L.

    ``fluxes`` holds all n+1 face fluxes including the two domain ends;
    the other arrays live on the faces where a difference was formed.
    """
    force_gradient: np.ndarray
    log_gradient: np.ndarray
    velocity: np.ndarray
    fluxes: np.ndarray

    @property
    def max_speed(self) -> float:
        return float(np.max(np.abs(self.velocity))) if self.velocity.size else 0.0


def superbee(upwind_jump: np.ndarray, downwind_jump: np.ndarray) -> np.ndarray:
    """Superbee-limited slope; zero where the two jumps differ in sign"""
    a, b = np.abs(upwind_jump), np.abs(downwind_jump)
    slope = np.maximum(np.minimum(2.0 * a, b), np.minimum(a, 2.0 * b))
    same_sign = np.sign(upwind_jump) * np.sign(downwind_jump) > 0
    return np.where(same_sign, np.sign(downwind_jump) * slope, 0.0)


def limited_density(density: np.ndarray, velocity: np.ndarray) -> np.ndarray:
    """Interface densities reconstructed from the upwind cell with a superbee slope.

    The value always lies between the two neighbouring cells. A cell ahead of
    a sharp front passes on (almost) nothing until it holds a third of the
    density behind it, so fronts stay a few cells wide.
    """
    padded = np.concatenate(([density[0]], density, [density[-1]]))
    left, right = padded[1:-2], padded[2:-1]
    from_left = left + 0.5 * superbee(left - padded[:-3], right - left)
    from_right = right + 0.5 * superbee(right - padded[3:], left - right)
    return np.where(velocity > 0, from_left, from_right)


def _values(u: FieldLike) -> np.ndarray:
    values = u.values if isinstance(u, DensityField) else np.asarray(u, dtype=float)
    if not np.all(np.isfinite(values)):
        raise NonFiniteFieldError("non-finite field")
    return values


def interface_state(ctx: OperatorContext, u: FieldLike) -> InterfaceState:
    """Interface gradients, velocities and fluxes of L at the field u"""
    grid = ctx.grid
    dx = grid.dx
    density = np.maximum(_values(u), ctx.positivity_floor)
    potential = ctx.potential.value(grid.centers)

    if ctx.is_no_flux:
        ext_density = density
        ext_potential = potential
    else:
        # ghost cells sit half a cell outside the domain
        ends = np.array([grid.x_min - 0.5 * dx, grid.x_max + 0.5 * dx])
        ghost_v = ctx.potential.value(ends)
        ext_density = np.concatenate(([ctx.left_value], density, [ctx.right_value]))
        ext_potential = np.concatenate(([ghost_v[0]], potential, [ghost_v[1]]))

    force_gradient = np.diff(ext_potential) / dx
    log_gradient = np.diff(np.log(ext_density)) / dx

    cost = ctx.cost
    if ctx.flux_mode == FluxMode.COMBINED:
        velocity = -cost.grad_1d(force_gradient + log_gradient)
    else:
        velocity = -(cost.grad_1d(force_gradient) + cost.grad_1d(log_gradient))

    if ctx.interface_density == InterfaceDensity.CENTERED:
        carried = 0.5 * (ext_density[:-1] + ext_density[1:])
    elif ctx.interface_density == InterfaceDensity.LIMITED:
        carried = limited_density(ext_density, velocity)
    else:
        carried = np.where(velocity > 0, ext_density[:-1], ext_density[1:])

    fluxes = carried * velocity
    if ctx.is_no_flux:
        fluxes = np.concatenate(([0.0], fluxes, [0.0]))
    return InterfaceState(force_gradient, log_gradient, velocity, fluxes)


def apply_L(ctx: OperatorContext, u: FieldLike) -> np.ndarray:
    """Rate du/dt = -(F_{i+1/2} - F_{i-1/2})/dx per cell"""
    state = interface_state(ctx, u)
    return -np.diff(state.fluxes) / ctx.grid.dx


def boundary_flux_balance(ctx: OperatorContext, u: FieldLike) -> float:
    """Net inflow through the domain ends; dx * sum(apply_L) equals this"""
    fluxes = interface_state(ctx, u).fluxes
    return float(fluxes[0] - fluxes[-1])


def _derivatives(w: np.ndarray, dx: float) -> Tuple[np.ndarray, np.ndarray]:
    """Centered first and second differences, one-sided second order at the ends"""
    first = np.gradient(w, dx, edge_order=2)
    second = np.empty_like(w)
    second[1:-1] = (w[2:] - 2.0 * w[1:-1] + w[:-2]) / dx ** 2
    if w.size >= 4:
        second[0] = (2.0 * w[0] - 5.0 * w[1] + 4.0 * w[2] - w[3]) / dx ** 2
        second[-1] = (2.0 * w[-1] - 5.0 * w[-2] + 4.0 * w[-3] - w[-4]) / dx ** 2
    else:
        second[0] = second[1]
        second[-1] = second[-2]
    return first, second


def quasilinear_coefficients(ctx: OperatorContext, w: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Principal coefficient a = f''(w') and lower-order term b so that Qw = a w'' + b.

    b depends on x and w' only, never on w itself.
    """
    w = np.asarray(w, dtype=float)
    if not np.all(np.isfinite(w)):
        raise NonFiniteFieldError("non-finite field")
    x = ctx.grid.centers
    cost = ctx.cost
    slope, _ = _derivatives(w, ctx.grid.dx)
    force = ctx.potential.grad(x)
    a = cost.hess_1d(slope)
    b = (slope * cost.grad_1d(slope)
         + slope * cost.grad_1d(force)
         + cost.hess_1d(force) * ctx.potential.hess(x))
    return a, b


def apply_Q(ctx: OperatorContext, w: np.ndarray) -> np.ndarray:
    """Qw at cell centers"""
    w = np.asarray(w, dtype=float)
    a, b = quasilinear_coefficients(ctx, w)
    _, curvature = _derivatives(w, ctx.grid.dx)
    return a * curvature + b


def check_LQ_identity(ctx: OperatorContext, u: FieldLike) -> float:
    """Max over cells 1..n-2 of |Lu - u Q(log u)| / (1 + |Lu|).

    L is evaluated with centered interface densities so both sides are
    second-order consistent.
    """
    values = np.maximum(_values(u), ctx.positivity_floor)
    centered = ctx.with_options(interface_density=InterfaceDensity.CENTERED)
    lu = apply_L(centered, values)
    uq = values * apply_Q(ctx, np.log(values))
    inner = slice(1, -1)
    mismatch = np.abs(lu[inner] - uq[inner]) / (1.0 + np.abs(lu[inner]))
    return float(np.max(mismatch)) if mismatch.size else 0.0


def ellipticity_samples(ctx: OperatorContext, u: FieldLike) -> np.ndarray:
    """a(p) = (phi*)''(p) at every interface gradient of the field"""
    state = interface_state(ctx, u)
    if ctx.flux_mode == FluxMode.COMBINED:
        gradients = state.force_gradient + state.log_gradient
    else:
        gradients = np.concatenate((state.force_gradient, state.log_gradient))
    return ctx.cost.hess_1d(gradients)
