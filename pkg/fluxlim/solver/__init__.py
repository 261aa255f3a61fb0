"""
Explicit time integration
"""

from .trajectory import RunConfig, StepRecord, Trajectory, STEP_COLUMNS
from .explicit import stable_dt, run, free_energy, DT_UNDERFLOW, INJECTION_BUDGET

__all__ = [
    'RunConfig',
    'StepRecord',
    'Trajectory',
    'STEP_COLUMNS',
    'stable_dt',
    'run',
    'free_energy',
    'DT_UNDERFLOW',
    'INJECTION_BUDGET',
]
