"""
External potentials V
"""

from abc import ABC, abstractmethod
from typing import Sequence, Union

import numpy as np
from numpy.polynomial import Polynomial

ArrayLike = Union[float, np.ndarray]


class Potential(ABC):
    """C^2 potential evaluated at positions (vectorized)"""

    name: str = "potential"

    @abstractmethod
    def value(self, x: ArrayLike) -> np.ndarray:
        pass

    @abstractmethod
    def grad(self, x: ArrayLike) -> np.ndarray:
        pass

    @abstractmethod
    def hess(self, x: ArrayLike) -> np.ndarray:
        pass

    @property
    def is_zero(self) -> bool:
        return False

    def spec(self) -> str:
        """Config string that parses back to this potential"""
        return self.name

    def __repr__(self) -> str:
        return f"{type(self).__name__}('{self.spec()}')"


class ZeroPotential(Potential):
    name = "zero"

    def value(self, x):
        return np.zeros_like(np.asarray(x, dtype=float))

    def grad(self, x):
        return np.zeros_like(np.asarray(x, dtype=float))

    def hess(self, x):
        return np.zeros_like(np.asarray(x, dtype=float))

    @property
    def is_zero(self) -> bool:
        return True


class QuadraticPotential(Potential):
    """V(x) = kappa x^2 / 2"""

    name = "quadratic"

    def __init__(self, kappa: float = 1.0):
        if not kappa > 0:
            raise ValueError(f"stiffness must be positive, got {kappa}")
        self.kappa = float(kappa)

    def value(self, x):
        return 0.5 * self.kappa * np.asarray(x, dtype=float) ** 2

    def grad(self, x):
        return self.kappa * np.asarray(x, dtype=float)

    def hess(self, x):
        return np.full_like(np.asarray(x, dtype=float), self.kappa)

    def spec(self) -> str:
        return f"quadratic:{self.kappa!r}"


class DoubleWellPotential(Potential):
    """V(x) = (x^2 - a^2)^2 / 4"""

    name = "double_well"

    def __init__(self, a: float = 1.0):
        self.a = float(a)

    def value(self, x):
        x = np.asarray(x, dtype=float)
        return 0.25 * (x ** 2 - self.a ** 2) ** 2

    def grad(self, x):
        x = np.asarray(x, dtype=float)
        return x * (x ** 2 - self.a ** 2)

    def hess(self, x):
        x = np.asarray(x, dtype=float)
        return 3.0 * x ** 2 - self.a ** 2

    def spec(self) -> str:
        return f"double_well:{self.a!r}"


class PolynomialPotential(Potential):
    """V(x) = sum p_i x^i"""

    name = "poly"

    def __init__(self, coefficients: Sequence[float]):
        coefficients = [float(p) for p in coefficients]
        if not coefficients:
            raise ValueError("polynomial potential needs at least one coefficient")
        self.coefficients = coefficients
        self._poly = Polynomial(coefficients)
        self._d1 = self._poly.deriv(1)
        self._d2 = self._poly.deriv(2)

    def value(self, x):
        return self._poly(np.asarray(x, dtype=float))

    def grad(self, x):
        return self._d1(np.asarray(x, dtype=float))

    def hess(self, x):
        return self._d2(np.asarray(x, dtype=float))

    @property
    def is_zero(self) -> bool:
        return all(p == 0.0 for p in self.coefficients[1:])

    def spec(self) -> str:
        return "poly:" + ",".join(repr(p) for p in self.coefficients)


def parse_potential(spec: str) -> Potential:
    """Parse ``zero``, ``quadratic:k``, ``double_well:a`` or ``poly:p0,p1,...``"""
    text = str(spec).strip()
    kind, _, args = text.partition(":")
    kind = kind.strip().lower()
    try:
        values = [float(a) for a in args.split(",")] if args.strip() else []
    except ValueError:
        raise ValueError(f"invalid potential parameters in '{spec}'")

    if kind == "zero" and not values:
        return ZeroPotential()
    if kind == "quadratic" and len(values) <= 1:
        return QuadraticPotential(*values)
    if kind in ("double_well", "doublewell") and len(values) <= 1:
        return DoubleWellPotential(*values)
    if kind in ("poly", "polynomial") and values:
        return PolynomialPotential(values)
    raise ValueError(f"unknown potential spec: '{spec}'")
