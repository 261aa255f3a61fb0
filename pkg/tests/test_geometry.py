import numpy as np
import pytest

from fluxlim.core.errors import NonFiniteFieldError, SupportError
from fluxlim.geometry import (
    DensityField,
    Grid1D,
    QuantileField,
    density_to_quantiles,
    l1_distance,
    mass,
    quantile_levels,
    quantiles_to_density,
)


def test_grid_layout():
    grid = Grid1D(0.0, 1.0, 10)
    assert grid.dx == pytest.approx(0.1)
    np.testing.assert_allclose(grid.centers[[0, -1]], [0.05, 0.95])
    assert grid.edges.size == 11
    assert grid.interfaces.size == 9
    assert grid.same_as(Grid1D(0.0, 1.0, 10))
    assert not grid.same_as(Grid1D(0.0, 1.0, 20))


@pytest.mark.parametrize("args", [(1.0, 0.0, 10), (0.0, 1.0, 1), (0.0, 1.0, 2.5)])
def test_grid_rejects_bad_layout(args):
    with pytest.raises(ValueError):
        Grid1D(*args)


def test_density_field_validation():
    grid = Grid1D(0.0, 1.0, 4)
    with pytest.raises(ValueError):
        DensityField(grid, [1.0, -0.1, 1.0, 1.0])
    with pytest.raises(NonFiniteFieldError, match="non-finite field"):
        DensityField(grid, [1.0, np.nan, 1.0, 1.0])
    with pytest.raises(ValueError):
        DensityField(grid, [1.0, 1.0])

    u = DensityField(grid, [1.0, 2.0, 3.0, 4.0])
    assert mass(u) == pytest.approx(2.5)
    assert u.mass == pytest.approx(2.5)
    with pytest.raises(ValueError):
        u.values[0] = 5.0


def test_floored_field():
    grid = Grid1D(0.0, 1.0, 3)
    u = DensityField(grid, [0.0, 1.0, 0.0]).floored(1e-12)
    np.testing.assert_array_equal(u.values, [1e-12, 1.0, 1e-12])


def test_quantile_field_must_increase():
    with pytest.raises(ValueError):
        QuantileField([0.0, 0.5, 0.5, 1.0])
    with pytest.raises(ValueError):
        QuantileField([1.0])


def test_uniform_density_quantiles_are_levels():
    grid = Grid1D(0.0, 1.0, 100)
    u = DensityField(grid, np.ones(100))
    q = density_to_quantiles(u, 50)
    np.testing.assert_allclose(q.positions, quantile_levels(50), atol=1e-12)
    np.testing.assert_allclose(quantiles_to_density(q, grid).values, 1.0, atol=1e-10)


def test_quantiles_ignore_total_mass():
    grid = Grid1D(0.0, 2.0, 80)
    values = 1.0 + grid.centers
    a = density_to_quantiles(DensityField(grid, values), 40)
    b = density_to_quantiles(DensityField(grid, 3.0 * values), 40)
    np.testing.assert_allclose(a.positions, b.positions, atol=1e-13)


def test_reconstruction_keeps_unit_mass():
    grid = Grid1D(-5.0, 5.0, 200)
    values = np.exp(-grid.centers ** 2)
    q = density_to_quantiles(DensityField(grid, values), 200)
    u = quantiles_to_density(q, grid)
    assert mass(u) == pytest.approx(1.0, abs=1e-12)


def test_support_outside_grid():
    grid = Grid1D(0.0, 1.0, 10)
    with pytest.raises(SupportError, match="support exceeds grid"):
        quantiles_to_density(QuantileField([0.2, 0.5, 1.5]), grid)


def test_l1_distance():
    grid = Grid1D(0.0, 1.0, 4)
    u = DensityField(grid, [1.0, 1.0, 1.0, 1.0])
    v = DensityField(grid, [1.0, 2.0, 1.0, 0.0])
    assert l1_distance(u, v) == pytest.approx(0.5)
    with pytest.raises(ValueError, match="mismatched grids"):
        l1_distance(u, DensityField(Grid1D(0.0, 2.0, 4), np.ones(4)))
