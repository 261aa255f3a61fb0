"""
CSV writers and readers for density snapshots, step logs and sweep summaries
"""

import csv
import logging
from pathlib import Path
from typing import Any, Dict, List, Sequence, Union

import numpy as np

from fluxlim.geometry import DensityField, Grid1D
from fluxlim.solver import STEP_COLUMNS, StepRecord

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def format_float(value: float) -> str:
    """17 significant digits, enough to round-trip a double"""
    return f"{float(value):.17g}"


def write_density_csv(u: DensityField, output_path: PathLike) -> Path:
    """Header ``x,u``, one row per cell center"""
    output_path = Path(output_path)
    output_path.parent.mkdir(parents=True, exist_ok=True)
    with open(output_path, 'w', newline='', encoding='utf-8') as f:
        writer = csv.writer(f)
        writer.writerow(['x', 'u'])
        for x, value in zip(u.grid.centers, u.values):
            writer.writerow([format_float(x), format_float(value)])
    return output_path


def read_density_csv(path: PathLike, grid: Grid1D) -> DensityField:
    """Load an ``x,u`` table onto ``grid``, interpolating when the centers differ"""
    path = Path(path)
    with open(path, 'r', newline='', encoding='utf-8') as f:
        reader = csv.DictReader(f)
        if reader.fieldnames is None or [n.strip() for n in reader.fieldnames] != ['x', 'u']:
            raise ValueError(f"{path}: expected header 'x,u'")
        rows = [(float(row['x']), float(row['u'])) for row in reader]
    if len(rows) < 2:
        raise ValueError(f"{path}: need at least two rows")
    data = np.array(rows, dtype=float)
    x, values = data[:, 0], data[:, 1]
    if np.any(np.diff(x) <= 0):
        raise ValueError(f"{path}: x must increase strictly")
    centers = grid.centers
    if x.size == centers.size and np.allclose(x, centers, rtol=0, atol=1e-9 * grid.dx):
        return DensityField(grid, values)
    logger.info(f"Interpolating {x.size} density samples from {path} onto {grid.n_cells} cells")
    return DensityField(grid, np.interp(centers, x, values, left=0.0, right=0.0))


def write_steps_csv(records: Sequence[StepRecord], output_path: PathLike) -> Path:
    output_path = Path(output_path)
    output_path.parent.mkdir(parents=True, exist_ok=True)
    with open(output_path, 'w', newline='', encoding='utf-8') as f:
        writer = csv.writer(f)
        writer.writerow(STEP_COLUMNS)
        for record in records:
            row = record.to_row()
            writer.writerow([str(row[0])] + [format_float(v) for v in row[1:]])
    return output_path


class CSVReportGenerator:
    """Margin table of a list of reports"""

    COLUMNS = ['check', 'verdict', 'margin', 'tolerance', 'hypotheses']

    def generate(self, reports: List[Dict[str, Any]], output_path: PathLike) -> Path:
        output_path = Path(output_path)
        output_path.parent.mkdir(parents=True, exist_ok=True)
        with open(output_path, 'w', newline='', encoding='utf-8') as f:
            writer = csv.writer(f)
            writer.writerow(self.COLUMNS)
            for report in reports:
                margin = report['margin']
                writer.writerow([
                    report['check'],
                    report['verdict'],
                    '' if margin is None else format_float(margin),
                    '' if report['tolerance'] is None else format_float(report['tolerance']),
                    '; '.join(report['hypotheses']),
                ])
        return output_path


def write_sweep_summary(rows: List[Dict[str, Any]], output_path: PathLike) -> Path:
    """One row per sweep point and check, ordered as given"""
    output_path = Path(output_path)
    output_path.parent.mkdir(parents=True, exist_ok=True)
    parameter_names: List[str] = []
    for row in rows:
        for name in row['parameters']:
            if name not in parameter_names:
                parameter_names.append(name)
    with open(output_path, 'w', newline='', encoding='utf-8') as f:
        writer = csv.writer(f)
        writer.writerow(['point'] + parameter_names + ['status', 'check', 'verdict', 'margin', 'error'])
        for row in rows:
            values = [str(row['parameters'].get(name, '')) for name in parameter_names]
            checks = row.get('reports') or [None]
            for report in checks:
                if report is None:
                    writer.writerow([row['point']] + values + [row['status'], '', '', '', row.get('error', '')])
                    continue
                margin = report['margin']
                writer.writerow([row['point']] + values + [
                    row['status'], report['check'], report['verdict'],
                    '' if margin is None else format_float(margin), row.get('error', ''),
                ])
    logger.info(f"Wrote sweep summary with {len(rows)} points to {output_path}")
    return output_path
