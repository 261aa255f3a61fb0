import pytest

from fluxlim.cost import RelativisticCost
from fluxlim.geometry import Grid1D
from fluxlim.operators import OperatorContext
from fluxlim.potential import QuadraticPotential, ZeroPotential


@pytest.fixture
def grid():
    return Grid1D(-6.0, 6.0, 400)


@pytest.fixture
def relativistic():
    return RelativisticCost(1.0)


@pytest.fixture
def quadratic():
    return QuadraticPotential(1.0)


@pytest.fixture
def ctx(relativistic, quadratic, grid):
    return OperatorContext(cost=relativistic, potential=quadratic, grid=grid)


@pytest.fixture
def free_ctx(relativistic):
    return OperatorContext(cost=relativistic, potential=ZeroPotential(), grid=Grid1D(-5.0, 5.0, 500))
