"""
Radial cost functions phi and their convex conjugates phi*
"""

import logging
import math
from abc import ABC, abstractmethod
from typing import Optional, Tuple, Union

import numpy as np
from scipy.interpolate import CubicSpline, make_interp_spline

from .conjugate import numerical_conjugate, validate_profile, relativistic_profile, load_profile_csv

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

# below this radius the radial factor phi*'(r)/r is replaced by phi*''(0)
_ORIGIN = 1e-8
# bounded costs keep |grad phi*| at or below this fraction of the speed bound,
# two units of 1e-15 so that the rounding of a vector norm stays under c (1 - 1e-15)
SPEED_CAP = 1.0 - 2e-15


class CostFunction(ABC):
    """Radial dual pair (phi, phi*) with phi*(z) = f(|z|).

    Subclasses provide the radial profile f of the conjugate and the radial
    primal c~; vector forms follow from grad phi*(z) = f'(r) z / r and
    hess phi*(z) = g I + (f'' - g) zz^T/r^2 with g = f'(r)/r.
    """

    name: str = "cost"

    @abstractmethod
    def radial_value(self, r: np.ndarray) -> np.ndarray:
        """f(r) = phi*(z) at |z| = r"""

    @abstractmethod
    def radial_slope(self, r: np.ndarray) -> np.ndarray:
        """f'(r)"""

    @abstractmethod
    def radial_curvature(self, r: np.ndarray) -> np.ndarray:
        """f''(r)"""

    @abstractmethod
    def primal_value(self, v: ArrayLike) -> np.ndarray:
        """phi(v) in 1-D, +inf outside the cost domain"""

    @abstractmethod
    def primal_slope(self, v: ArrayLike) -> np.ndarray:
        """phi'(v) in 1-D"""

    @abstractmethod
    def primal_curvature(self, v: ArrayLike) -> np.ndarray:
        """phi''(v) in 1-D"""

    @property
    @abstractmethod
    def speed_bound(self) -> float:
        """Radius of the cost domain, math.inf when unbounded"""

    @property
    def domain_radius(self) -> float:
        return self.speed_bound

    @property
    def is_bounded(self) -> bool:
        return math.isfinite(self.speed_bound)

    def radial_factor(self, r: np.ndarray) -> np.ndarray:
        """f'(r)/r, continuous at the origin"""
        r = np.asarray(r, dtype=float)
        safe = np.where(r > _ORIGIN, r, 1.0)
        return np.where(r > _ORIGIN, self.radial_slope(safe) / safe,
                        self.radial_curvature(np.zeros_like(r)))

    # vector forms, d in {1, 2, 3}

    def dual_value(self, z: ArrayLike) -> float:
        z = _as_vector(z)
        return float(self.radial_value(np.array(vector_norm(z))))

    def dual_grad(self, z: ArrayLike) -> np.ndarray:
        z = _as_vector(z)
        return self.radial_factor(np.array(vector_norm(z))) * z

    def dual_hess(self, z: ArrayLike) -> np.ndarray:
        z = _as_vector(z)
        r = vector_norm(z)
        d = z.size
        g = float(self.radial_factor(np.array(r)))
        if r <= _ORIGIN:
            return g * np.eye(d)
        unit = z / r
        curvature = float(self.radial_curvature(np.array(r)))
        return g * np.eye(d) + (curvature - g) * np.outer(unit, unit)

    # 1-D vectorized forms used by the operators

    def value_1d(self, p: ArrayLike) -> np.ndarray:
        return self.radial_value(np.abs(np.asarray(p, dtype=float)))

    def grad_1d(self, p: ArrayLike) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        return self.radial_factor(np.abs(p)) * p

    def hess_1d(self, p: ArrayLike) -> np.ndarray:
        return self.radial_curvature(np.abs(np.asarray(p, dtype=float)))

    def describe(self) -> dict:
        return {"kind": self.name, "speed_bound": self.speed_bound}

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.describe()})"


class RelativisticCost(CostFunction):
    """phi_c(x) = c^2 (1 - sqrt(1 - |x|^2/c^2)) on |x| <= c"""

    name = "relativistic"

    def __init__(self, c: float = 1.0):
        if not c > 0 or not math.isfinite(c):
            raise ValueError(f"speed c must be a positive finite number, got {c}")
        self.c = float(c)

    def _root(self, r):
        """sqrt(r^2 + c^2) without squaring r"""
        return np.hypot(np.asarray(r, dtype=float), self.c)

    def _ratio(self, r):
        """r / sqrt(r^2 + c^2), capped in magnitude at SPEED_CAP"""
        r = np.asarray(r, dtype=float)
        infinite = np.isinf(r)
        finite = np.where(infinite, 0.0, r)
        ratio = np.where(infinite, np.sign(r), finite / self._root(finite))
        return np.clip(ratio, -SPEED_CAP, SPEED_CAP)

    def radial_value(self, r):
        r = np.asarray(r, dtype=float)
        finite = np.where(np.isinf(r), 0.0, r)
        value = self.c * finite * (finite / (self._root(finite) + self.c))
        return np.where(np.isinf(r), np.inf, value)

    def radial_slope(self, r):
        return self.c * self._ratio(r)

    def radial_curvature(self, r):
        return (self.c / self._root(r)) ** 3

    def radial_factor(self, r):
        return self.c / self._root(r)

    def grad_1d(self, p):
        return self.c * self._ratio(p)

    def dual_grad(self, z):
        z = _as_vector(z)
        r = vector_norm(z)
        if math.isinf(r):
            raise ValueError("dual gradient needs a finite argument")
        return self.c * float(self._ratio(r)) * (z / r) if r > 0 else np.zeros_like(z)

    def _inside(self, v):
        v = np.asarray(v, dtype=float)
        return v, np.abs(v) < self.c

    def primal_value(self, v):
        v, inside = self._inside(v)
        w = np.where(inside, v, 0.0)
        root = np.sqrt(1.0 - (w / self.c) ** 2)
        return np.where(inside, w ** 2 / (1.0 + root), np.inf)

    def primal_slope(self, v):
        v, inside = self._inside(v)
        w = np.where(inside, v, 0.0)
        return np.where(inside, w / np.sqrt(1.0 - (w / self.c) ** 2), np.copysign(np.inf, v))

    def primal_curvature(self, v):
        v, inside = self._inside(v)
        w = np.where(inside, v, 0.0)
        return np.where(inside, (1.0 - (w / self.c) ** 2) ** -1.5, np.inf)

    @property
    def speed_bound(self) -> float:
        return self.c

    def describe(self) -> dict:
        return {"kind": self.name, "c": self.c, "speed_bound": self.c}


class ClassicalQuadraticCost(CostFunction):
    """phi(x) = |x|^2/2, self-dual"""

    name = "classical"

    def radial_value(self, r):
        return 0.5 * np.asarray(r, dtype=float) ** 2

    def radial_slope(self, r):
        return np.asarray(r, dtype=float).copy()

    def radial_curvature(self, r):
        return np.ones_like(np.asarray(r, dtype=float))

    def radial_factor(self, r):
        return np.ones_like(np.asarray(r, dtype=float))

    def primal_value(self, v):
        return 0.5 * np.asarray(v, dtype=float) ** 2

    def primal_slope(self, v):
        return np.asarray(v, dtype=float).copy()

    def primal_curvature(self, v):
        return np.ones_like(np.asarray(v, dtype=float))

    @property
    def speed_bound(self) -> float:
        return math.inf


class TabulatedRadialCost(CostFunction):
    """General radial cost phi(x) = c~(|x|) on |x| <= c from sampled c~.

    The conjugate f is tabulated at construction on dual radii up to s_max,
    the profile slope at 0.99 c where the sampled maximizer is still interior,
    and interpolated by an even quintic spline. Beyond s_max the slope
    saturates as f'(s) = c - (c - f'(s_max)) (s_max/s)^alpha with alpha
    matching f'' at s_max, which keeps f C^2, strictly convex and |f'| < c.
    """

    name = "tabulated"

    CUT_FRACTION = 0.99
    N_LINEAR = 40
    N_GEOMETRIC = 160

    def __init__(self, r: np.ndarray, phi: np.ndarray, source: Optional[str] = None):
        r, phi = validate_profile(r, phi)
        self.radius = float(r[-1])
        self.source = source
        self._r = r
        self._phi = phi
        self._primal = CubicSpline(r, phi, bc_type=((1, 0.0), 'not-a-knot'))
        self._build_table()

    @classmethod
    def from_csv(cls, path) -> 'TabulatedRadialCost':
        r, phi = load_profile_csv(path)
        return cls(r, phi, source=str(path))

    @classmethod
    def relativistic(cls, c: float = 1.0, samples: int = 10_000) -> 'TabulatedRadialCost':
        r, phi = relativistic_profile(c, samples)
        return cls(r, phi, source=f"relativistic:{c}")

    def _build_table(self):
        r, phi = self._r, self._phi
        cut = max(2, min(int(np.searchsorted(r, self.CUT_FRACTION * self.radius)), r.size - 2))
        s_max = float((phi[cut + 1] - phi[cut - 1]) / (r[cut + 1] - r[cut - 1]))
        if not s_max > 0:
            raise ValueError("profile too flat to tabulate its conjugate")
        s_break = s_max / 100.0
        knots = np.concatenate((np.linspace(0.0, s_break, self.N_LINEAR),
                                np.geomspace(s_break, s_max, self.N_GEOMETRIC)[1:]))
        values = numerical_conjugate(r, phi, knots)

        mirrored_knots = np.concatenate((-knots[:0:-1], knots))
        mirrored_values = np.concatenate((values[:0:-1], values))
        spline = make_interp_spline(mirrored_knots, mirrored_values, k=5)
        self._spline = spline
        self._spline_d1 = spline.derivative(1)
        self._spline_d2 = spline.derivative(2)
        self.s_max = s_max

        curvature = self._spline_d2(knots)
        if np.any(curvature <= 0) or np.any(np.diff(values, 2) <= 0):
            raise ValueError("conjugate of profile is not strictly convex")

        self._f_max = float(self._spline(s_max))
        self._slope_max = float(self._spline_d1(s_max))
        self._curv_max = float(self._spline_d2(s_max))
        gap = self.radius - self._slope_max
        if not gap > 0:
            raise ValueError("conjugate slope reaches the cost radius inside the table")
        self._alpha = self._curv_max * s_max / gap
        logger.debug(f"Tabulated conjugate: s_max={s_max:.4g}, tail exponent {self._alpha:.3g}")

    def _tail(self, s: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        c, sm, a = self.radius, self.s_max, self._alpha
        gap = c - self._slope_max
        ratio = sm / s
        slope = c - gap * ratio ** a
        curvature = a * gap * ratio ** a / s
        if abs(a - 1.0) < 1e-12:
            integral = gap * sm * np.log(s / sm)
        else:
            integral = gap * sm * (ratio ** (a - 1.0) - 1.0) / (1.0 - a)
        value = self._f_max + c * (s - sm) - integral
        return value, slope, curvature

    def _evaluate(self, r: np.ndarray, which: int) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        inside = r <= self.s_max
        table = (self._spline, self._spline_d1, self._spline_d2)[which]
        result = np.asarray(table(np.where(inside, r, 0.0)), dtype=float)
        if np.any(~inside):
            tail = self._tail(np.where(inside, self.s_max, r))[which]
            result = np.where(inside, result, tail)
        return result

    def radial_value(self, r):
        return np.maximum(self._evaluate(r, 0), 0.0)

    def radial_slope(self, r):
        return np.minimum(self._evaluate(r, 1), SPEED_CAP * self.radius)

    def radial_curvature(self, r):
        return self._evaluate(r, 2)

    def direct_conjugate(self, s: ArrayLike) -> ArrayLike:
        """Untabulated supremum, kept as a verification oracle"""
        return numerical_conjugate(self._r, self._phi, s)

    def primal_value(self, v):
        v = np.abs(np.asarray(v, dtype=float))
        inside = v < self.radius
        return np.where(inside, self._primal(np.where(inside, v, 0.0)), np.inf)

    def primal_slope(self, v):
        v = np.asarray(v, dtype=float)
        a = np.abs(v)
        inside = a < self.radius
        return np.where(inside, np.sign(v) * self._primal(np.where(inside, a, 0.0), 1),
                        np.copysign(np.inf, v))

    def primal_curvature(self, v):
        a = np.abs(np.asarray(v, dtype=float))
        inside = a < self.radius
        return np.where(inside, self._primal(np.where(inside, a, 0.0), 2), np.inf)

    @property
    def speed_bound(self) -> float:
        return self.radius

    def describe(self) -> dict:
        return {"kind": self.name, "c": self.radius, "speed_bound": self.radius,
                "source": self.source, "table_radius": self.s_max}


def speed_bound(cost: CostFunction) -> float:
    return cost.speed_bound


def dual_value(cost: CostFunction, z: ArrayLike) -> float:
    return cost.dual_value(z)


def dual_grad(cost: CostFunction, z: ArrayLike) -> np.ndarray:
    return cost.dual_grad(z)


def dual_hess(cost: CostFunction, z: ArrayLike) -> np.ndarray:
    return cost.dual_hess(z)


def _as_vector(z: ArrayLike) -> np.ndarray:
    z = np.atleast_1d(np.asarray(z, dtype=float))
    if z.ndim != 1 or not 1 <= z.size <= 3:
        raise ValueError(f"cost functions take vectors of dimension 1 to 3, got shape {z.shape}")
    return z


def vector_norm(z: np.ndarray) -> float:
    """Euclidean norm that does not overflow for entries near the float limit"""
    scale = float(np.max(np.abs(z)))
    if scale == 0.0 or math.isinf(scale):
        return scale
    return scale * float(np.linalg.norm(z / scale))
