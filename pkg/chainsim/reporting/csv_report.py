#!/usr/bin/env python3
"""
CSV result tables
One row per (run, snapshot) in results.csv and per-(algorithm, scenario,
request count) means and standard deviations over seeds in summary.csv.
"""

import logging
from pathlib import Path
from typing import List, Sequence, Union

import pandas as pd

from ..chain.types import LoadBalanceIndicators
from ..placement.types import Algorithm
from ..simulator.engine import SimulationPoint, SimulationResult
from ..simulator.scenarios import ScenarioKind

logger = logging.getLogger(__name__)

RESULT_COLUMNS = [
    "algorithm", "scenario", "seed", "n_requests", "accepted", "acceptance_ratio",
    "network_utilization", "link_util_stddev", "link_peak_ratio", "lbi_c", "lbi_n", "lbi_s",
    "lbi_composite", "wall_ms",
]
METRIC_COLUMNS = RESULT_COLUMNS[5:]
GROUP_COLUMNS = ["algorithm", "scenario", "n_requests"]
FLOAT_FORMAT = "%.6g"


def results_frame(results: Sequence[SimulationResult], record_timing: bool = False) -> pd.DataFrame:
    """Flatten runs into one row per snapshot, in run then request-count order"""
    rows = []
    for result in results:
        for point in result.points:
            rows.append({
                "algorithm": result.algorithm.value,
                "scenario": result.scenario.value,
                "seed": result.seed,
                "n_requests": point.n_requests,
                "accepted": point.accepted,
                "acceptance_ratio": point.acceptance_ratio,
                "network_utilization": point.network_utilization,
                "link_util_stddev": point.link_util_stddev,
                "link_peak_ratio": point.link_peak_ratio,
                "lbi_c": point.lbi.lbi_c,
                "lbi_n": point.lbi.lbi_n,
                "lbi_s": point.lbi.lbi_s,
                "lbi_composite": point.lbi.composite,
                "wall_ms": point.wall_ms if record_timing else 0.0,
            })
    return pd.DataFrame(rows, columns=RESULT_COLUMNS)


def summarize(results: Union[Sequence[SimulationResult], pd.DataFrame]) -> pd.DataFrame:
    """
    Mean and population standard deviation of every metric over seeds

    Args:
        results: Runs, or a frame shaped like results.csv

    Returns:
        One row per (algorithm, scenario, n_requests) in first-seen order,
        columns ``<metric>_mean`` and ``<metric>_std`` plus ``seeds``
    """
    frame = results if isinstance(results, pd.DataFrame) else results_frame(results, True)
    if frame.empty:
        raise ValueError("Nothing to summarize")
    grouped = frame.groupby(GROUP_COLUMNS, sort=False)
    means = grouped[METRIC_COLUMNS].mean().add_suffix("_mean")
    stds = grouped[METRIC_COLUMNS].std(ddof=0).add_suffix("_std")
    summary = pd.concat([means, stds], axis=1)
    summary = summary[[f"{m}_{s}" for m in METRIC_COLUMNS for s in ("mean", "std")]]
    summary.insert(0, "seeds", grouped.size())
    return summary.reset_index()


def emit_csv(results: Sequence[SimulationResult], out_dir: Union[str, Path],
             record_timing: bool = False) -> List[Path]:
    """
    Write results.csv and summary.csv

    Args:
        results: Runs to write, nonempty
        out_dir: Created if missing
        record_timing: Write wall_ms; otherwise 0 so reruns are byte-identical

    Returns:
        Paths of the two files
    """
    if not results:
        raise ValueError("emit_csv needs at least one result")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    frame = results_frame(results, record_timing)
    results_path = out_dir / "results.csv"
    summary_path = out_dir / "summary.csv"
    frame.to_csv(results_path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    summarize(frame).to_csv(summary_path, index=False, float_format=FLOAT_FORMAT,
                            lineterminator="\n")
    logger.info(f"Wrote {len(frame)} result row(s) to {results_path} and summary to {summary_path}")
    return [results_path, summary_path]


def read_results_csv(path: Union[str, Path]) -> List[SimulationResult]:
    """Rebuild runs (without their plans) from a results.csv"""
    frame = pd.read_csv(path)
    missing = set(RESULT_COLUMNS) - set(frame.columns)
    if missing:
        raise ValueError(f"{path} is missing column(s) {sorted(missing)}")
    results: List[SimulationResult] = []
    for (algorithm, scenario, seed), rows in frame.groupby(["algorithm", "scenario", "seed"],
                                                          sort=False):
        result = SimulationResult(algorithm=Algorithm(algorithm), scenario=ScenarioKind(scenario),
                                  seed=int(seed))
        for row in rows.itertuples(index=False):
            lbi = LoadBalanceIndicators(lbi_c=float(row.lbi_c), lbi_n=float(row.lbi_n),
                                        lbi_s=float(row.lbi_s), composite=float(row.lbi_composite),
                                        link_peak_ratio=float(row.link_peak_ratio))
            result.points.append(SimulationPoint(
                n_requests=int(row.n_requests),
                accepted=int(row.accepted),
                acceptance_ratio=float(row.acceptance_ratio),
                network_utilization=float(row.network_utilization),
                link_util_stddev=float(row.link_util_stddev),
                link_peak_ratio=float(row.link_peak_ratio),
                lbi=lbi,
                wall_ms=float(row.wall_ms),
            ))
        results.append(result)
    logger.debug(f"Read {len(results)} run(s) from {path}")
    return results
