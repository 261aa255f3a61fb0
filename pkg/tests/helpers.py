import numpy as np

from fluxlim.geometry import DensityField


def gaussian_field(grid, center=0.0, width=1.0):
    """Unit-mass Gaussian sampled at the cell centers"""
    values = np.exp(-0.5 * ((grid.centers - center) / width) ** 2)
    return DensityField(grid, values / (grid.dx * values.sum()))
