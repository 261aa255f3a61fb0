"""
Pluggable checks run by the verification engine
"""

from typing import Dict, Type

from fluxlim.core.errors import ConfigError
from .base import CheckContext, PrincipleCheck
from .evolution import (
    ComparisonCheck,
    WeakMaxCheck,
    PropagationCheck,
    GibbsConvergenceCheck,
    LyapunovCheck,
    ConservationCheck,
    EllipticityCheck,
)
from .stationary import StationaryCheck, StationaryOrderCheck, LQIdentityCheck, ConstantStateCheck
from .limits import ClassicalLimitCheck, JkoCrossValidationCheck, CostPropertiesCheck

CHECKS: Dict[str, Type[PrincipleCheck]] = {
    cls.name: cls for cls in (
        ComparisonCheck,
        WeakMaxCheck,
        PropagationCheck,
        GibbsConvergenceCheck,
        LyapunovCheck,
        ConservationCheck,
        EllipticityCheck,
        StationaryCheck,
        StationaryOrderCheck,
        LQIdentityCheck,
        ConstantStateCheck,
        ClassicalLimitCheck,
        JkoCrossValidationCheck,
        CostPropertiesCheck,
    )
}


def create_check(name: str, tolerance=None, **params) -> PrincipleCheck:
    """Instantiate a registered check by name"""
    try:
        cls = CHECKS[name]
    except KeyError:
        raise ConfigError(f"unknown check '{name}'", key="checks")
    return cls(tolerance=tolerance, **params)


__all__ = [
    'CheckContext',
    'PrincipleCheck',
    'CHECKS',
    'create_check',
    'ComparisonCheck',
    'WeakMaxCheck',
    'PropagationCheck',
    'GibbsConvergenceCheck',
    'LyapunovCheck',
    'ConservationCheck',
    'EllipticityCheck',
    'StationaryCheck',
    'StationaryOrderCheck',
    'LQIdentityCheck',
    'ConstantStateCheck',
    'ClassicalLimitCheck',
    'JkoCrossValidationCheck',
    'CostPropertiesCheck',
]
