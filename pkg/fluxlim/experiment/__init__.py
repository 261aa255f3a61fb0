"""
Experiments built from configuration files
"""

from .initial import parse_initial_spec, build_initial, gaussian, mollified_indicator
from .runner import Experiment, ExperimentResult

__all__ = [
    'parse_initial_spec',
    'build_initial',
    'gaussian',
    'mollified_indicator',
    'Experiment',
    'ExperimentResult',
]
