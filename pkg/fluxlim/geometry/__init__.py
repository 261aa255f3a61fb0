"""
Grids, densities and quantile representations
"""

from .grid import (
    Grid1D,
    DensityField,
    QuantileField,
    mass,
    density_to_quantiles,
    quantiles_to_density,
    quantile_levels,
    l1_distance,
)

__all__ = [
    'Grid1D',
    'DensityField',
    'QuantileField',
    'mass',
    'density_to_quantiles',
    'quantiles_to_density',
    'quantile_levels',
    'l1_distance',
]
