import numpy as np
import pytest

from fluxlim.core.errors import NonFiniteFieldError
from fluxlim.core.interfaces import BoundaryKind, FluxMode, InterfaceDensity
from fluxlim.cost import ClassicalQuadraticCost
from fluxlim.geometry import DensityField, Grid1D
from fluxlim.operators import (
    OperatorContext,
    apply_L,
    apply_Q,
    boundary_flux_balance,
    check_LQ_identity,
    ellipticity_samples,
    interface_state,
    limited_density,
    quasilinear_coefficients,
    superbee,
)
from fluxlim.potential import ZeroPotential, gibbs_density

from .helpers import gaussian_field


def bump(grid):
    return DensityField(grid, 1.0 + 0.5 * np.exp(-grid.centers ** 2))


@pytest.mark.parametrize("mode", list(FluxMode))
def test_gibbs_is_discrete_equilibrium(ctx, mode):
    ctx = ctx.with_options(flux_mode=mode)
    rate = apply_L(ctx, gibbs_density(ctx.potential, ctx.grid))
    assert np.max(np.abs(rate)) < 1e-9


def test_constants_are_stationary_without_potential(free_ctx):
    rate = apply_L(free_ctx, np.full(free_ctx.grid.n_cells, 3.0))
    np.testing.assert_array_equal(rate, 0.0)


@pytest.mark.parametrize("density", list(InterfaceDensity))
def test_no_flux_conserves_mass(ctx, density):
    ctx = ctx.with_options(interface_density=density)
    u = gaussian_field(ctx.grid, center=1.0, width=0.7)
    rate = apply_L(ctx, u)
    assert abs(ctx.grid.dx * np.sum(rate)) < 1e-12
    assert boundary_flux_balance(ctx, u) == 0.0


def test_superbee_slopes():
    upwind = np.array([1.0, -1.0, 0.5, 0.0])
    downwind = np.array([2.0, 1.0, 4.0, 3.0])
    np.testing.assert_allclose(superbee(upwind, downwind), [2.0, 0.0, 1.0, 0.0])
    np.testing.assert_allclose(superbee(-upwind, -downwind), [-2.0, 0.0, -1.0, 0.0])


def test_limited_density_holds_back_thin_front():
    density = np.array([1.0, 1.0, 0.2, 1e-12, 1e-12])
    carried = limited_density(density, np.ones(4))
    assert carried[0] == 1.0
    assert carried[1] == 1.0
    assert carried[2] == pytest.approx(1e-12, abs=1e-15)
    assert carried[3] == pytest.approx(1e-12, rel=1e-12)
    assert np.all(carried >= np.minimum(density[:-1], density[1:]))
    assert np.all(carried <= np.maximum(density[:-1], density[1:]))

    mirrored = limited_density(density[::-1], -np.ones(4))
    np.testing.assert_allclose(mirrored, carried[::-1], rtol=1e-12, atol=1e-15)


def test_limited_density_passes_thick_front():
    # once the front cell holds more than a third of the plateau it starts to pass mass on
    carried = limited_density(np.array([1.0, 1.0, 0.6, 0.0, 0.0]), np.ones(4))
    assert carried[2] == pytest.approx(0.3)


def test_dirichlet_boundary_balance(relativistic, quadratic):
    grid = Grid1D(-2.0, 2.0, 80)
    ctx = OperatorContext(relativistic, quadratic, grid, boundary=BoundaryKind.DIRICHLET,
                          left_value=0.2, right_value=0.05)
    u = gaussian_field(grid, width=0.8)
    total = grid.dx * np.sum(apply_L(ctx, u))
    assert total == pytest.approx(boundary_flux_balance(ctx, u), abs=1e-12)
    assert interface_state(ctx, u).fluxes.size == grid.n_cells + 1


def test_dirichlet_needs_positive_values(relativistic, quadratic, grid):
    with pytest.raises(ValueError, match="positive left density"):
        OperatorContext(relativistic, quadratic, grid, boundary=BoundaryKind.DIRICHLET, right_value=1.0)


def test_velocity_is_limited(free_ctx):
    grid = free_ctx.grid
    # nearly discontinuous data drive the log-gradients far beyond c
    values = np.where(np.abs(grid.centers) < 1.0, 1.0, 1e-8)
    separate = interface_state(free_ctx, values)
    combined = interface_state(free_ctx.with_options(flux_mode=FluxMode.COMBINED), values)
    assert np.max(np.abs(separate.log_gradient)) > 100.0
    assert separate.max_speed <= 2.0 * free_ctx.cost.speed_bound
    assert combined.max_speed <= free_ctx.cost.speed_bound


def test_flux_modes_agree_for_classical_cost(quadratic, grid):
    ctx = OperatorContext(ClassicalQuadraticCost(), quadratic, grid)
    u = gaussian_field(grid, center=-0.5)
    np.testing.assert_allclose(apply_L(ctx, u),
                               apply_L(ctx.with_options(flux_mode=FluxMode.COMBINED), u),
                               rtol=1e-10, atol=1e-12)


def test_classical_upwind_matches_heat_flow(grid):
    ctx = OperatorContext(ClassicalQuadraticCost(), ZeroPotential(), grid,
                          interface_density=InterfaceDensity.CENTERED)
    u = gaussian_field(grid, width=1.0)
    # the centered log flux is the heat flux up to O(dx^2)
    second = np.gradient(np.gradient(u.values, grid.dx), grid.dx)
    inner = slice(10, -10)
    np.testing.assert_allclose(apply_L(ctx, u)[inner], second[inner], atol=2e-3)


def test_q_vanishes_on_log_gibbs(ctx):
    w = -ctx.potential.value(ctx.grid.centers) + 0.3
    np.testing.assert_allclose(apply_Q(ctx, w), 0.0, atol=1e-10)


def test_quasilinear_coefficients(ctx):
    w = np.sin(ctx.grid.centers)
    a, b = quasilinear_coefficients(ctx, w)
    assert np.all(a > 0) and np.all(a <= 1.0)
    # b does not see a constant shift of w
    _, shifted = quasilinear_coefficients(ctx, w + 5.0)
    np.testing.assert_allclose(b, shifted, atol=1e-10)


def test_lq_identity_converges(relativistic, quadratic):
    mismatches = []
    for n in (400, 800):
        grid = Grid1D(-6.0, 6.0, n)
        ctx = OperatorContext(relativistic, quadratic, grid)
        mismatches.append(check_LQ_identity(ctx, bump(grid)))
    assert mismatches[1] < mismatches[0]
    assert mismatches[0] / mismatches[1] > 3.0


def test_ellipticity_samples(ctx):
    samples = ellipticity_samples(ctx, gaussian_field(ctx.grid))
    assert samples.size == 2 * (ctx.grid.n_cells - 1)
    assert np.all(samples > 0) and np.all(samples <= 1.0)


def test_non_finite_field(ctx):
    values = np.ones(ctx.grid.n_cells)
    values[3] = np.inf
    with pytest.raises(NonFiniteFieldError):
        apply_L(ctx, values)
    with pytest.raises(NonFiniteFieldError):
        apply_Q(ctx, values)
