"""
Core configuration, shared types and errors
"""

from .errors import (
    FluxlimError,
    ConfigError,
    SupportError,
    NonFiniteFieldError,
    BlowUpError,
    StiffnessCollapseError,
    NewtonFailure,
)
from .interfaces import (
    SignClass,
    BoundaryKind,
    FluxMode,
    InterfaceDensity,
    Verdict,
    PrincipleReport,
)

__all__ = [
    'FluxlimError',
    'ConfigError',
    'SupportError',
    'NonFiniteFieldError',
    'BlowUpError',
    'StiffnessCollapseError',
    'NewtonFailure',
    'SignClass',
    'BoundaryKind',
    'FluxMode',
    'InterfaceDensity',
    'Verdict',
    'PrincipleReport',
]
