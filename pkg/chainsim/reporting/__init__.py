"""
CSV tables and SVG figures of simulation runs
"""

from .csv_report import emit_csv, read_results_csv, results_frame, summarize
from .plots import emit_plots

__all__ = [
    "emit_csv",
    "emit_plots",
    "read_results_csv",
    "results_frame",
    "summarize",
]
