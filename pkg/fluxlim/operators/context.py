"""
Operator context: the cost, potential, grid and boundary data shared by L and Q
"""

from dataclasses import dataclass, replace
from typing import Optional

from fluxlim.core.interfaces import BoundaryKind, FluxMode, InterfaceDensity
from fluxlim.cost import CostFunction
from fluxlim.geometry import Grid1D
from fluxlim.potential import Potential


@dataclass(frozen=True)
class OperatorContext:
    """Everything apply_L and apply_Q need besides the field itself"""
    cost: CostFunction
    potential: Potential
    grid: Grid1D
    boundary: BoundaryKind = BoundaryKind.NO_FLUX
    left_value: Optional[float] = None
    right_value: Optional[float] = None
    positivity_floor: float = 1e-300
    flux_mode: FluxMode = FluxMode.SEPARATE
    interface_density: InterfaceDensity = InterfaceDensity.UPWIND

    def __post_init__(self):
        if not self.positivity_floor > 0:
            raise ValueError(f"positivity_floor must be positive, got {self.positivity_floor}")
        if self.boundary == BoundaryKind.DIRICHLET:
            for side, value in (("left", self.left_value), ("right", self.right_value)):
                if value is None or not value > 0:
                    raise ValueError(f"Dirichlet boundary needs a positive {side} density, got {value}")

    @property
    def is_no_flux(self) -> bool:
        return self.boundary == BoundaryKind.NO_FLUX

    def with_options(self, **changes) -> 'OperatorContext':
        return replace(self, **changes)

    def describe(self) -> dict:
        info = {
            "cost": self.cost.describe(),
            "potential": self.potential.spec(),
            "grid": {"x_min": self.grid.x_min, "x_max": self.grid.x_max, "n_cells": self.grid.n_cells},
            "boundary": self.boundary.value,
            "flux_mode": self.flux_mode.value,
            "interface_density": self.interface_density.value,
        }
        if self.boundary == BoundaryKind.DIRICHLET:
            info["boundary_values"] = [self.left_value, self.right_value]
        return info
