import logging

import numpy as np
import pytest

from fluxlim.core.interfaces import SignClass
from fluxlim.cost import ClassicalQuadraticCost, RelativisticCost
from fluxlim.geometry import Grid1D, mass
from fluxlim.potential import (
    DoubleWellPotential,
    PolynomialPotential,
    QuadraticPotential,
    ZeroPotential,
    classify_sign,
    force_flux_divergence,
    gibbs_density,
    is_confining,
    is_convex_on,
    parse_potential,
    warn_if_not_confining,
)


@pytest.mark.parametrize("spec, cls", [
    ("zero", ZeroPotential),
    ("quadratic", QuadraticPotential),
    ("quadratic:2.5", QuadraticPotential),
    ("double_well:1", DoubleWellPotential),
    ("doublewell", DoubleWellPotential),
    ("poly:0,0,-0.5", PolynomialPotential),
])
def test_parse_potential(spec, cls):
    assert isinstance(parse_potential(spec), cls)


@pytest.mark.parametrize("spec", ["cubic:1", "quadratic:a", "quadratic:1,2", "poly:", "zero:1"])
def test_parse_potential_rejects(spec):
    with pytest.raises(ValueError):
        parse_potential(spec)


def test_spec_round_trip():
    for potential in (QuadraticPotential(2.0), DoubleWellPotential(1.5), PolynomialPotential([1.0, 0.0, 3.0])):
        again = parse_potential(potential.spec())
        x = np.linspace(-2, 2, 9)
        np.testing.assert_allclose(again.value(x), potential.value(x))


def test_polynomial_derivatives():
    V = PolynomialPotential([1.0, 2.0, 3.0])
    np.testing.assert_allclose(V.value(2.0), 1 + 4 + 12)
    np.testing.assert_allclose(V.grad(2.0), 2 + 12)
    np.testing.assert_allclose(V.hess(2.0), 6.0)
    assert PolynomialPotential([4.0]).is_zero
    assert not V.is_zero


def test_double_well_derivatives():
    V = DoubleWellPotential(1.0)
    x = np.linspace(-2, 2, 41)
    h = 1e-6
    np.testing.assert_allclose(V.grad(x), (V.value(x + h) - V.value(x - h)) / (2 * h), atol=1e-6)
    np.testing.assert_allclose(V.hess(x), (V.grad(x + h) - V.grad(x - h)) / (2 * h), atol=1e-6)


def test_gibbs_density_unit_mass(grid, quadratic):
    u = gibbs_density(quadratic, grid)
    assert mass(u) == pytest.approx(1.0, abs=1e-14)
    assert np.argmax(u.values) in (grid.n_cells // 2 - 1, grid.n_cells // 2)
    np.testing.assert_allclose(u.values, u.values[::-1], rtol=1e-12)


def test_gibbs_of_zero_potential_is_uniform():
    grid = Grid1D(0.0, 4.0, 16)
    np.testing.assert_allclose(gibbs_density(ZeroPotential(), grid).values, 0.25)


def test_force_flux_divergence_sign_classes():
    grid = Grid1D(-1.0, 1.0, 100)
    cost = RelativisticCost(1.0)
    assert classify_sign(QuadraticPotential(1.0), cost, grid) == SignClass.NON_NEGATIVE
    assert classify_sign(PolynomialPotential([0.0, 0.0, -0.5]), cost, grid) == SignClass.NON_POSITIVE
    assert classify_sign(DoubleWellPotential(1.0), cost, grid) == SignClass.MIXED
    assert classify_sign(ZeroPotential(), cost, grid) == SignClass.NON_NEGATIVE


def test_force_flux_divergence_classical():
    x = np.linspace(-1, 1, 5)
    np.testing.assert_allclose(force_flux_divergence(QuadraticPotential(3.0), ClassicalQuadraticCost(), x), 3.0)


def test_confinement(grid, caplog):
    assert is_confining(QuadraticPotential(1.0), grid)
    assert is_convex_on(QuadraticPotential(1.0), grid)
    assert not is_convex_on(DoubleWellPotential(1.0), grid)
    with caplog.at_level(logging.WARNING):
        assert not warn_if_not_confining(PolynomialPotential([0.0, 1.0]), grid)
    assert "does not grow" in caplog.text
