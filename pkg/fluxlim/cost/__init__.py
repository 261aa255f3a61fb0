"""
Cost functions and convex conjugates
"""

from typing import Optional

from .functions import (
    CostFunction,
    RelativisticCost,
    ClassicalQuadraticCost,
    TabulatedRadialCost,
    dual_value,
    dual_grad,
    dual_hess,
    speed_bound,
    vector_norm,
)
from .conjugate import numerical_conjugate, load_profile_csv, relativistic_profile


def make_cost(kind: str, c: Optional[float] = None, profile: Optional[str] = None,
              samples: int = 10_000) -> CostFunction:
    """Build a cost from its configuration fields"""
    kind = kind.lower()
    if kind == "relativistic":
        return RelativisticCost(1.0 if c is None else c)
    if kind == "classical":
        return ClassicalQuadraticCost()
    if kind == "tabulated":
        if profile:
            return TabulatedRadialCost.from_csv(profile)
        return TabulatedRadialCost.relativistic(1.0 if c is None else c, samples)
    raise ValueError(f"unknown cost kind: {kind}")


__all__ = [
    'CostFunction',
    'RelativisticCost',
    'ClassicalQuadraticCost',
    'TabulatedRadialCost',
    'dual_value',
    'dual_grad',
    'dual_hess',
    'speed_bound',
    'vector_norm',
    'numerical_conjugate',
    'load_profile_csv',
    'relativistic_profile',
    'make_cost',
]
