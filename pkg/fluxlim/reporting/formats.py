"""
JSON documents and plot-script templates
"""

import json
import logging
import math
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def to_jsonable(value: Any) -> Any:
    """Plain JSON types; NaN and infinities become null"""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    if value is None or isinstance(value, str):
        return value
    return str(value)


def write_json(document: Dict[str, Any], output_path: PathLike) -> Path:
    output_path = Path(output_path)
    output_path.parent.mkdir(parents=True, exist_ok=True)
    with open(output_path, 'w', encoding='utf-8') as f:
        json.dump(to_jsonable(document), f, indent=2, sort_keys=True, allow_nan=False)
        f.write('\n')
    return output_path


class JSONReportGenerator:
    """report.json: one entry per check plus a verdict summary"""

    def generate(self, reports: List[Dict[str, Any]], output_path: PathLike,
                 metadata: Optional[Dict[str, Any]] = None) -> Path:
        summary: Dict[str, int] = {}
        for report in reports:
            summary[report['verdict']] = summary.get(report['verdict'], 0) + 1
        document = {
            'metadata': metadata or {},
            'summary': {'total': len(reports), 'by_verdict': summary},
            'checks': reports,
        }
        path = write_json(document, output_path)
        logger.info(f"Generated JSON report: {path}")
        return path


PLOT_TEMPLATE = '''"""Plot the density snapshots of {{ title }}.

Generated by fluxlim {{ version }}; needs matplotlib.
"""

import csv
from pathlib import Path

import matplotlib.pyplot as plt

HERE = Path(__file__).resolve().parent
SNAPSHOTS = [
{%- for snap in snapshots %}
    ({{ snap.t }}, "{{ snap.file }}"),
{%- endfor %}
]


def load(name):
    with open(HERE / name, newline="") as f:
        rows = list(csv.DictReader(f))
    return [float(r["x"]) for r in rows], [float(r["u"]) for r in rows]


def main():
    fig, ax = plt.subplots(figsize=(8, 5))
    for t, name in SNAPSHOTS:
        x, u = load(name)
        ax.plot(x, u, label=f"t = {t:g}")
{%- if gibbs_file %}
    x, u = load("{{ gibbs_file }}")
    ax.plot(x, u, "k--", label="Gibbs")
{%- endif %}
    ax.set_xlabel("x")
    ax.set_ylabel("u")
    ax.set_title("{{ title }}")
    ax.legend()
    fig.tight_layout()
    fig.savefig(HERE / "snapshots.png", dpi=150)


if __name__ == "__main__":
    main()
'''


class PlotScriptGenerator:
    """Ready-to-run matplotlib script next to the snapshot CSVs"""

    def generate(self, snapshots: List[Dict[str, Any]], output_path: PathLike, title: str,
                 version: str, gibbs_file: Optional[str] = None) -> Path:
        from jinja2 import Template

        script = Template(PLOT_TEMPLATE).render(
            snapshots=snapshots, title=title, version=version, gibbs_file=gibbs_file,
        )
        output_path = Path(output_path)
        output_path.parent.mkdir(parents=True, exist_ok=True)
        with open(output_path, 'w', encoding='utf-8') as f:
            f.write(script)
        logger.info(f"Generated plot script: {output_path}")
        return output_path
