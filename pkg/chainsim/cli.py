#!/usr/bin/env python3
"""
CLI for ChainSim
Runs placement sweeps from an experiment file and writes CSV tables and SVG figures
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from rich.console import Console
from rich.table import Table

from . import settings
from .config import ConfigError, ExperimentConfig, format_defaults, parse_config
from .reporting import emit_csv, emit_plots, summarize
from .simulator import SimulationResult, sweep

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG_ERROR = 1
EXIT_RUNTIME_ERROR = 2


def run_experiment(config: ExperimentConfig, out_dir: Optional[Path] = None,
                   plots: Optional[bool] = None) -> List[SimulationResult]:
    """
    Sweep every configured algorithm and seed, then write the result files

    Args:
        config: Parsed experiment
        out_dir: Overrides ``run.out_dir``
        plots: Overrides ``run.plots``

    Returns:
        The sweep's results
    """
    run = config.run
    out_dir = Path(out_dir or run.out_dir)
    plots = run.plots if plots is None else plots
    scenario = config.scenario_config()

    results = sweep(config.topology_config(), scenario, run.algorithms, run.seeds,
                    config.placement_params(), workers=run.workers)
    emit_csv(results, out_dir, record_timing=run.record_timing)
    if plots:
        emit_plots(summarize(results), out_dir)
    return results


def print_summary(results: Sequence[SimulationResult], console: Optional[Console] = None):
    """Console table of the last snapshot, averaged over seeds"""
    console = console or Console()
    summary = summarize(results)
    last = summary.loc[summary.groupby(["algorithm", "scenario"], sort=False)["n_requests"].idxmax()]

    table = Table(title="Final snapshot (mean over seeds)")
    for column in ("Algorithm", "Scenario", "Requests", "Seeds", "Acceptance", "Utilization",
                   "Link std", "LBI"):
        table.add_column(column, justify="left" if column in ("Algorithm", "Scenario") else "right")
    for row in last.itertuples(index=False):
        table.add_row(
            row.algorithm.upper(),
            row.scenario,
            str(row.n_requests),
            str(row.seeds),
            f"{row.acceptance_ratio_mean:.3f}",
            f"{row.network_utilization_mean:.3f}",
            f"{row.link_util_stddev_mean:.4f}",
            f"{row.lbi_composite_mean:.4f}",
        )
    console.print(table)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chainsim",
        description="Service function chain placement simulator for FiWi edge networks",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Data-intensive sweep of all four algorithms
  python run_chainsim.py run --config configs/data_intensive.cfg --plots

  # Twenty seeds into a custom directory
  python run_chainsim.py run --config configs/user_intensive.cfg --seeds 20 --out results/ui

  # Every key with its default
  python run_chainsim.py run --print-defaults
        """
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    run = subparsers.add_parser("run", help="Run a sweep from an experiment file")
    run.add_argument("--config", "-c", type=str, help="Experiment file (defaults when omitted)")
    run.add_argument("--out", "-o", type=str, help="Output directory (overrides run.out_dir)")
    run.add_argument("--plots", action="store_true", help="Write SVG figures")
    run.add_argument("--seeds", type=int, help="Use seeds 1..N instead of run.seeds")
    run.add_argument("--print-defaults", action="store_true",
                     help="Print every config key with its default and exit")
    run.add_argument("--verbose", "-v", action="store_true", help="Debug logging")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main CLI function; returns the process exit code"""
    parser = build_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else settings.LOG_LEVEL,
        format=settings.LOG_FORMAT,
        datefmt=settings.LOG_DATEFMT,
    )

    if args.print_defaults:
        print(format_defaults())
        return EXIT_OK

    try:
        config = parse_config(args.config) if args.config else ExperimentConfig()
        if args.seeds is not None:
            if args.seeds < 1:
                raise ConfigError("--seeds must be at least 1")
            config = config.model_copy(update={
                "run": config.run.model_copy(update={"seeds": list(range(1, args.seeds + 1))})
            })
    except ConfigError as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIG_ERROR

    try:
        results = run_experiment(config, Path(args.out) if args.out else None,
                                 plots=True if args.plots else None)
    except Exception as e:
        logger.error(f"Run failed: {e}")
        return EXIT_RUNTIME_ERROR

    print_summary(results)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
