"""
Run configuration and trajectory containers shared by both integrators
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np

from fluxlim.core.interfaces import FluxMode
from fluxlim.geometry import DensityField, Grid1D
from fluxlim.operators import OperatorContext


@dataclass
class RunConfig:
    """Forward Euler run parameters"""
    ctx: OperatorContext
    t_end: float
    cfl_factor: float = 0.4
    snapshot_times: Sequence[float] = ()
    positivity_floor: float = 1e-12
    log_every: int = 1

    def __post_init__(self):
        if not self.t_end > 0:
            raise ValueError(f"t_end must be positive, got {self.t_end}")
        if not 0 < self.cfl_factor <= 1:
            raise ValueError(f"cfl_factor must lie in (0, 1], got {self.cfl_factor}")
        if not self.positivity_floor > 0:
            raise ValueError(f"positivity_floor must be positive, got {self.positivity_floor}")
        if self.log_every < 1:
            raise ValueError(f"log_every must be >= 1, got {self.log_every}")
        times = sorted(float(t) for t in self.snapshot_times)
        for t in times:
            if t < 0 or t > self.t_end:
                raise ValueError(f"snapshot time {t} outside [0, {self.t_end}]")
        self.snapshot_times = times

    @property
    def flux_mode(self) -> FluxMode:
        return self.ctx.flux_mode

    @property
    def grid(self) -> Grid1D:
        return self.ctx.grid

    def output_times(self) -> List[float]:
        """Snapshot times including 0 and t_end, strictly increasing"""
        times = sorted(set([0.0, float(self.t_end)] + list(self.snapshot_times)))
        return times

    def to_dict(self) -> Dict[str, Any]:
        return {
            "operator": self.ctx.describe(),
            "t_end": self.t_end,
            "cfl_factor": self.cfl_factor,
            "snapshot_times": list(self.snapshot_times),
            "positivity_floor": self.positivity_floor,
            "log_every": self.log_every,
        }


@dataclass
class StepRecord:
    """Statistics after one step"""
    step: int
    t: float
    dt: float
    mass: float
    min_density: float
    max_density: float
    free_energy: float
    injected: float = 0.0

    def to_row(self) -> List[float]:
        return [self.step, self.t, self.dt, self.mass, self.min_density,
                self.max_density, self.free_energy, self.injected]


STEP_COLUMNS = ["step", "t", "dt", "mass", "min", "max", "free_energy", "injected"]


@dataclass
class Trajectory:
    """Snapshots and step log of one run"""
    config: Any
    snapshots: List[Tuple[float, DensityField]] = field(default_factory=list)
    step_log: List[StepRecord] = field(default_factory=list)
    integrator: str = "fv"
    metadata: Dict[str, Any] = field(default_factory=dict)

    def add_snapshot(self, t: float, u: DensityField):
        if self.snapshots and not t > self.snapshots[-1][0]:
            raise ValueError(f"snapshot time {t} does not increase")
        self.snapshots.append((float(t), u))

    @property
    def grid(self) -> Grid1D:
        return self.snapshots[0][1].grid

    @property
    def times(self) -> np.ndarray:
        return np.array([t for t, _ in self.snapshots])

    @property
    def initial(self) -> DensityField:
        return self.snapshots[0][1]

    @property
    def final(self) -> DensityField:
        return self.snapshots[-1][1]

    @property
    def final_time(self) -> float:
        return self.snapshots[-1][0]

    def stacked(self) -> np.ndarray:
        """Snapshot values as an array of shape (n_snapshots, n_cells)"""
        return np.vstack([u.values for _, u in self.snapshots])

    def snapshot_at(self, t: float, atol: float = 1e-12) -> DensityField:
        for time, u in self.snapshots:
            if abs(time - t) <= atol:
                return u
        raise KeyError(f"no snapshot at t={t}")
