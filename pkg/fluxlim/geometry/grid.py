"""
Uniform 1-D grids, density fields and quantile fields
"""

import logging
from dataclasses import dataclass

import numpy as np

from fluxlim.core.errors import NonFiniteFieldError, SupportError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid of ``n_cells`` cells on [x_min, x_max]"""
    x_min: float
    x_max: float
    n_cells: int

    def __post_init__(self):
        if not self.x_max > self.x_min:
            raise ValueError(f"x_max ({self.x_max}) must exceed x_min ({self.x_min})")
        if int(self.n_cells) != self.n_cells or self.n_cells < 2:
            raise ValueError(f"n_cells must be an integer >= 2, got {self.n_cells}")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n_cells

    @property
    def centers(self) -> np.ndarray:
        return self.x_min + (np.arange(self.n_cells) + 0.5) * self.dx

    @property
    def edges(self) -> np.ndarray:
        return self.x_min + np.arange(self.n_cells + 1) * self.dx

    @property
    def interfaces(self) -> np.ndarray:
        """Interior interface positions x_{i+1/2}, i = 0..n-2"""
        return self.edges[1:-1]

    def same_as(self, other: 'Grid1D') -> bool:
        return (self.n_cells == other.n_cells
                and np.isclose(self.x_min, other.x_min, rtol=0, atol=1e-14)
                and np.isclose(self.x_max, other.x_max, rtol=0, atol=1e-14))


@dataclass(frozen=True, eq=False)
class DensityField:
    """Cell-averaged nonnegative density on a grid"""
    grid: Grid1D
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != (self.grid.n_cells,):
            raise ValueError(f"expected {self.grid.n_cells} values, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise NonFiniteFieldError("non-finite field")
        if np.any(values < 0):
            raise ValueError("density values must be nonnegative")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def mass(self) -> float:
        return mass(self)

    def floored(self, floor: float) -> 'DensityField':
        return DensityField(self.grid, np.maximum(self.values, floor))


@dataclass(frozen=True, eq=False)
class QuantileField:
    """Strictly increasing positions X_j of the (j-1/2)/M quantiles of a unit-mass density"""
    positions: np.ndarray

    def __post_init__(self):
        positions = np.array(self.positions, dtype=float)
        if positions.ndim != 1 or positions.size < 2:
            raise ValueError("a quantile field needs at least two positions")
        if not np.all(np.isfinite(positions)):
            raise NonFiniteFieldError("non-finite field")
        if np.any(np.diff(positions) <= 0):
            raise ValueError("quantile positions must be strictly increasing")
        positions.setflags(write=False)
        object.__setattr__(self, "positions", positions)

    @property
    def n_quantiles(self) -> int:
        return self.positions.size

    @property
    def levels(self) -> np.ndarray:
        return quantile_levels(self.n_quantiles)


def quantile_levels(n_quantiles: int) -> np.ndarray:
    """Midpoint levels (j - 1/2)/M"""
    return (np.arange(n_quantiles) + 0.5) / n_quantiles


def mass(u: DensityField) -> float:
    """Total mass dx * sum(u)"""
    return float(u.grid.dx * np.sum(u.values))


def density_to_quantiles(u: DensityField, n_quantiles: int) -> QuantileField:
    """Invert the piecewise-linear CDF of u/mass(u) at the midpoint levels.

    Flat CDF stretches (zero-density cells) resolve to their leftmost preimage.
    """
    total = mass(u)
    if not total > 0:
        raise ValueError("empty density")
    grid = u.grid
    cdf = np.concatenate(([0.0], np.cumsum(u.values) * grid.dx)) / total
    cdf[-1] = 1.0
    levels = quantile_levels(n_quantiles)
    k = np.searchsorted(cdf, levels, side="left")
    k = np.clip(k, 1, grid.n_cells)
    lower = cdf[k - 1]
    width = cdf[k] - lower
    positions = grid.edges[k - 1] + (levels - lower) / width * grid.dx
    return QuantileField(positions)


def quantile_cdf_knots(q: QuantileField):
    """Knots of the piecewise-linear CDF represented by a quantile field.

    Each gap carries mass 1/M; the two half masses below X_1 and above X_M
    extend the first and last gap densities.
    """
    x = q.positions
    first_gap = x[1] - x[0]
    last_gap = x[-1] - x[-2]
    knots = np.concatenate(([x[0] - 0.5 * first_gap], x, [x[-1] + 0.5 * last_gap]))
    levels = np.concatenate(([0.0], q.levels, [1.0]))
    return knots, levels


def quantiles_to_density(q: QuantileField, grid: Grid1D) -> DensityField:
    """Cell-average the piecewise-constant density of a quantile field onto a grid"""
    x = q.positions
    tol = 1e-12 * (grid.x_max - grid.x_min)
    if x[0] < grid.x_min - tol or x[-1] > grid.x_max + tol:
        raise SupportError("support exceeds grid")
    knots, levels = quantile_cdf_knots(q)
    knots[0] = max(knots[0], grid.x_min)
    knots[-1] = min(knots[-1], grid.x_max)
    cdf_at_edges = np.interp(grid.edges, knots, levels, left=0.0, right=1.0)
    values = np.diff(cdf_at_edges) / grid.dx
    return DensityField(grid, np.maximum(values, 0.0))


def l1_distance(u: DensityField, v: DensityField) -> float:
    """L1 distance of two fields on the same grid"""
    if not u.grid.same_as(v.grid):
        raise ValueError("mismatched grids")
    return float(u.grid.dx * np.sum(np.abs(u.values - v.values)))
