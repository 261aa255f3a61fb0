"""
Initial conditions from their configuration strings
"""

import logging
import re
from pathlib import Path
from typing import List, Optional, Tuple

import numpy as np

from fluxlim.geometry import DensityField, Grid1D
from fluxlim.potential import Potential, gibbs_density

logger = logging.getLogger(__name__)

_CALL = re.compile(r"^\s*([a-z_]+)\s*(?:\((.*)\))?\s*$")
_ARITY = {"gaussian": 2, "indicator": 2, "gibbs": 0, "uniform": 1}


def parse_initial_spec(spec: str) -> Tuple[str, List]:
    """``gaussian(c,w)``, ``indicator(a,b)``, ``gibbs``, ``uniform(v)`` or ``csv:<path>``"""
    text = str(spec).strip()
    if text.startswith("csv:"):
        if not text[4:].strip():
            raise ValueError("csv initial condition needs a path")
        return "csv", [text[4:].strip()]
    match = _CALL.match(text)
    if match is None or match.group(1) not in _ARITY:
        raise ValueError(f"unknown initial condition '{spec}'")
    kind, raw = match.group(1), match.group(2)
    try:
        args = [float(a) for a in raw.split(",")] if raw and raw.strip() else []
    except ValueError:
        raise ValueError(f"invalid parameters in initial condition '{spec}'")
    if len(args) != _ARITY[kind]:
        raise ValueError(f"initial condition '{kind}' takes {_ARITY[kind]} parameters, got {len(args)}")
    if kind == "gaussian" and not args[1] > 0:
        raise ValueError("gaussian width must be positive")
    if kind == "indicator" and not args[1] > args[0]:
        raise ValueError("indicator needs a < b")
    if kind == "uniform" and not args[0] > 0:
        raise ValueError("uniform value must be positive")
    return kind, args


def _normalized(grid: Grid1D, values: np.ndarray) -> np.ndarray:
    total = grid.dx * np.sum(values)
    if not total > 0:
        raise ValueError("initial condition has no mass on the grid")
    return values / total


def gaussian(grid: Grid1D, center: float, width: float) -> DensityField:
    """Unit-mass Gaussian sampled at cell centers"""
    x = grid.centers
    return DensityField(grid, _normalized(grid, np.exp(-0.5 * ((x - center) / width) ** 2)))


def mollified_indicator(grid: Grid1D, a: float, b: float) -> DensityField:
    """Unit-mass indicator of [a, b] with linear ramps two cells wide at each end"""
    x = grid.centers
    ramp = 2.0 * grid.dx
    rise = np.clip((x - a) / ramp + 0.5, 0.0, 1.0)
    fall = np.clip((b - x) / ramp + 0.5, 0.0, 1.0)
    return DensityField(grid, _normalized(grid, rise * fall))


def build_initial(spec: str, grid: Grid1D, potential: Potential, offset: float = 0.0,
                  base_dir: Optional[Path] = None) -> DensityField:
    kind, args = parse_initial_spec(spec)
    if kind == "gaussian":
        u = gaussian(grid, *args)
    elif kind == "indicator":
        u = mollified_indicator(grid, *args)
    elif kind == "gibbs":
        u = gibbs_density(potential, grid)
    elif kind == "uniform":
        u = DensityField(grid, np.full(grid.n_cells, args[0]))
    else:
        from fluxlim.reporting import read_density_csv
        path = Path(args[0])
        if not path.is_absolute() and base_dir is not None:
            path = base_dir / path
        u = read_density_csv(path, grid)
    if offset:
        u = DensityField(grid, u.values + offset)
    logger.debug(f"Initial condition {spec} (offset {offset}): mass {u.mass:.12g}")
    return u
