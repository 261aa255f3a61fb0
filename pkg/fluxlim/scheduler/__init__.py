"""
Parameter sweeps
"""

from .sweep import SweepPoint, PointOutcome, SweepRunner, expand_sweep

__all__ = ['SweepPoint', 'PointOutcome', 'SweepRunner', 'expand_sweep']
