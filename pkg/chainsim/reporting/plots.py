#!/usr/bin/env python3
"""
SVG figures: one line per algorithm over the request count
"""

import logging
from pathlib import Path
from typing import List, Union

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import pandas as pd

logger = logging.getLogger(__name__)

FIGURES = [
    ("fig_acceptance.svg", "acceptance_ratio", "Service request acceptance ratio"),
    ("fig_utilization.svg", "network_utilization", "Network utilization"),
    ("fig_stddev.svg", "link_util_stddev", "Std. dev. of link utilization"),
    ("fig_lbi.svg", "lbi_composite", "Load balancing indicator"),
]
MARKERS = ["o", "s", "^", "D", "v", "x"]

# Stable SVG element ids across reruns
plt.rcParams["svg.hashsalt"] = "chainsim"


def _line_chart(summary: pd.DataFrame, metric: str, ylabel: str, path: Path):
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for i, (algorithm, rows) in enumerate(summary.groupby("algorithm", sort=False)):
        ax.errorbar(rows["n_requests"], rows[f"{metric}_mean"], yerr=rows[f"{metric}_std"],
                    marker=MARKERS[i % len(MARKERS)], capsize=3, label=algorithm.upper())
    ax.set_xlabel("Number of service chains")
    ax.set_ylabel(ylabel)
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def emit_plots(summary: pd.DataFrame, out_dir: Union[str, Path]) -> List[Path]:
    """
    Write the four figures per scenario

    Args:
        summary: Frame from ``summarize``
        out_dir: Figures go here, or into one subdirectory per scenario
            when the summary holds more than one

    Returns:
        Written SVG paths
    """
    if summary.empty:
        raise ValueError("emit_plots needs a nonempty summary")
    out_dir = Path(out_dir)
    scenarios = list(summary["scenario"].unique())
    written = []
    for scenario in scenarios:
        target = out_dir / scenario if len(scenarios) > 1 else out_dir
        target.mkdir(parents=True, exist_ok=True)
        rows = summary[summary["scenario"] == scenario]
        for filename, metric, ylabel in FIGURES:
            path = target / filename
            _line_chart(rows, metric, ylabel, path)
            written.append(path)
    logger.info(f"Wrote {len(written)} figure(s) under {out_dir}")
    return written
