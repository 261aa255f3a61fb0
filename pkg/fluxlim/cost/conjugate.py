"""
Numerical Legendre transform of radial cost profiles
"""

import csv
import logging
from pathlib import Path
from typing import Tuple, Union

import numpy as np

logger = logging.getLogger(__name__)

CONVEXITY_TOL = 1e-10


def validate_profile(r: np.ndarray, phi: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Check a sampled radial profile c~ on [0, c]"""
    r = np.asarray(r, dtype=float)
    phi = np.asarray(phi, dtype=float)
    if r.ndim != 1 or r.shape != phi.shape or r.size < 3:
        raise ValueError("profile needs at least three matching (r, phi) samples")
    if r[0] != 0.0 or np.any(np.diff(r) <= 0):
        raise ValueError("profile radii must start at 0 and increase strictly")
    if abs(phi[0]) > CONVEXITY_TOL:
        raise ValueError("profile must vanish at r = 0")
    if np.any(np.diff(phi) < -CONVEXITY_TOL):
        raise ValueError("profile must be nondecreasing")
    slopes = np.diff(phi) / np.diff(r)
    if np.any(np.diff(slopes) < -CONVEXITY_TOL):
        raise ValueError("profile not convex")
    return r, phi


def numerical_conjugate(r: np.ndarray, phi: np.ndarray,
                        r_dual: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """sup_{0 <= r <= c} (s*r - c~(r)) over the samples, refined by a local parabola.

    Accepts a scalar or an array of dual radii s >= 0.
    """
    r, phi = validate_profile(r, phi)
    s = np.atleast_1d(np.asarray(r_dual, dtype=float))
    if np.any(s < 0):
        raise ValueError("dual radius must be nonnegative")

    q = s[:, None] * r[None, :] - phi[None, :]
    k = np.argmax(q, axis=1)
    rows = np.arange(s.size)
    best = q[rows, k]

    interior = (k > 0) & (k < r.size - 1)
    if np.any(interior):
        ki = k[interior]
        ri = rows[interior]
        h1 = r[ki] - r[ki - 1]
        h2 = r[ki + 1] - r[ki]
        d1 = (q[ri, ki] - q[ri, ki - 1]) / h1
        d2 = (q[ri, ki + 1] - q[ri, ki]) / h2
        curvature = 2.0 * (d2 - d1) / (h1 + h2)
        slope = (d1 * h2 + d2 * h1) / (h1 + h2)
        refined = q[ri, ki].copy()
        ok = curvature < 0
        offset = np.where(ok, -slope / np.where(ok, curvature, -1.0), 0.0)
        ok &= np.abs(offset) <= np.maximum(h1, h2)
        refined[ok] = q[ri, ki][ok] - slope[ok] ** 2 / (2.0 * curvature[ok])
        best[interior] = np.maximum(refined, q[ri, ki])

    best = np.maximum(best, 0.0)
    if np.ndim(r_dual) == 0:
        return float(best[0])
    return best


def load_profile_csv(path: Union[str, Path]) -> Tuple[np.ndarray, np.ndarray]:
    """Read a profile CSV with header ``r,phi``"""
    path = Path(path)
    with open(path, 'r', newline='', encoding='utf-8') as f:
        reader = csv.DictReader(f)
        if reader.fieldnames is None or [n.strip() for n in reader.fieldnames] != ['r', 'phi']:
            raise ValueError(f"{path}: expected header 'r,phi'")
        rows = [(float(row['r']), float(row['phi'])) for row in reader]
    data = np.array(rows, dtype=float)
    logger.info(f"Loaded cost profile with {len(rows)} samples from {path}")
    return validate_profile(data[:, 0], data[:, 1])


def relativistic_profile(c: float, samples: int) -> Tuple[np.ndarray, np.ndarray]:
    """Samples of c~(r) = c^2 (1 - sqrt(1 - r^2/c^2)) on [0, c]"""
    r = np.linspace(0.0, c, samples)
    ratio = np.clip(1.0 - (r / c) ** 2, 0.0, None)
    phi = r ** 2 / (1.0 + np.sqrt(ratio))
    return r, phi
