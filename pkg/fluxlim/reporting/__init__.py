"""
CSV, JSON and plot-script outputs
"""

from .csv import (
    CSVReportGenerator,
    format_float,
    read_density_csv,
    write_density_csv,
    write_steps_csv,
    write_sweep_summary,
)
from .formats import JSONReportGenerator, PlotScriptGenerator, to_jsonable, write_json
from .generator import ReportGenerator, TrajectoryWriter, snapshot_filename

__all__ = [
    'CSVReportGenerator',
    'format_float',
    'read_density_csv',
    'write_density_csv',
    'write_steps_csv',
    'write_sweep_summary',
    'JSONReportGenerator',
    'PlotScriptGenerator',
    'to_jsonable',
    'write_json',
    'ReportGenerator',
    'TrajectoryWriter',
    'snapshot_filename',
]
