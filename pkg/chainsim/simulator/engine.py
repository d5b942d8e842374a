#!/usr/bin/env python3
"""
Simulation Engine
Feeds a seeded request stream to one deployment algorithm, admitting
requests strictly one after another, and snapshots acceptance, utilization
and load balance at the configured request counts. ``sweep`` runs the
cartesian product of algorithms and seeds on fresh networks.
"""

import logging
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

from tqdm import tqdm

from .. import settings
from ..chain.accounting import release_plan
from ..chain.indicators import compute_lbi, network_utilization
from ..chain.types import DeploymentPlan, LoadBalanceIndicators
from ..network.topology import PhysicalNetwork, build_tree_star
from ..network.types import TopologyConfig
from ..placement import PLANNERS
from ..placement.types import Algorithm, PlacementParams, RejectReason
from .scenarios import ScenarioConfig, ScenarioKind, generate_requests

logger = logging.getLogger(__name__)


@dataclass
class SimulationPoint:
    """Metrics after the first ``n_requests`` requests of a run"""
    n_requests: int
    accepted: int
    acceptance_ratio: float
    network_utilization: float
    link_util_stddev: float
    link_peak_ratio: float  # max/mean link utilization
    lbi: LoadBalanceIndicators
    wall_ms: float = 0.0


@dataclass
class SimulationResult:
    """One (algorithm, scenario, seed) run"""
    algorithm: Algorithm
    scenario: ScenarioKind
    seed: int
    points: List[SimulationPoint] = field(default_factory=list)
    accepted_plans: List[DeploymentPlan] = field(default_factory=list)
    rejections: Dict[RejectReason, int] = field(default_factory=dict)

    @property
    def final(self) -> SimulationPoint:
        return self.points[-1]


def _snapshot(net: PhysicalNetwork, n_requests: int, accepted: int, params: PlacementParams,
              started: float) -> SimulationPoint:
    lbi = compute_lbi(net, params.weights)
    return SimulationPoint(
        n_requests=n_requests,
        accepted=accepted,
        acceptance_ratio=accepted / n_requests if n_requests else 1.0,
        network_utilization=network_utilization(net),
        link_util_stddev=lbi.lbi_n,
        link_peak_ratio=lbi.link_peak_ratio,
        lbi=lbi,
        wall_ms=(time.perf_counter() - started) * 1000.0,
    )


def run_simulation(net: PhysicalNetwork, scenario: ScenarioConfig,
                   algorithm: Union[Algorithm, str], params: Optional[PlacementParams] = None,
                   seed: Optional[int] = None) -> SimulationResult:
    """
    Admit one request stream sequentially with one algorithm

    Args:
        net: Freshly built (zero-load) network; accepted plans stay applied
        scenario: Request distributions and snapshot counts
        algorithm: Deployment algorithm
        params: Placement parameters; defaults when omitted
        seed: Request stream seed; the scenario's own when omitted

    Returns:
        SimulationResult with one point per configured request count
    """
    algorithm = Algorithm(algorithm)
    params = params or PlacementParams()
    if seed is not None:
        scenario = scenario.with_seed(seed)
    planner = PLANNERS[algorithm](params)
    requests = generate_requests(scenario, scenario.max_requests, net)
    result = SimulationResult(algorithm=algorithm, scenario=scenario.kind, seed=scenario.rng_seed)

    counts = set(scenario.request_counts)
    rejections: Counter = Counter()
    started = time.perf_counter()
    if 0 in counts:
        result.points.append(_snapshot(net, 0, 0, params, started))
    for position, req in enumerate(requests, 1):
        outcome = planner.deploy(req, net)
        if outcome.accepted:
            result.accepted_plans.append(outcome.plan)
        else:
            rejections[outcome.reason] += 1
        if position in counts:
            result.points.append(
                _snapshot(net, position, len(result.accepted_plans), params, started)
            )

    result.rejections = dict(rejections)
    logger.info(
        f"{algorithm.value} {scenario.kind.value} seed {scenario.rng_seed}: accepted "
        f"{len(result.accepted_plans)}/{len(requests)}"
    )
    return result


def release_all(net: PhysicalNetwork, result: SimulationResult) -> PhysicalNetwork:
    """Release every plan the run accepted, newest first"""
    for plan in reversed(result.accepted_plans):
        release_plan(net, plan)
    return net


def _run_job(job: Tuple[TopologyConfig, ScenarioConfig, Algorithm, int, PlacementParams]
             ) -> SimulationResult:
    net_config, scenario, algorithm, seed, params = job
    return run_simulation(build_tree_star(net_config), scenario, algorithm, params, seed)


def sweep(net_config: TopologyConfig, scenario: ScenarioConfig,
          algorithms: Sequence[Union[Algorithm, str]], seeds: Sequence[int],
          params: Optional[PlacementParams] = None,
          workers: int = settings.MAX_WORKERS) -> List[SimulationResult]:
    """
    Run every (algorithm, seed) pair on its own fresh network

    Args:
        net_config: Topology every run builds from scratch
        scenario: Request distributions (its seed is replaced per run)
        algorithms: Algorithms to compare
        seeds: Request stream seeds; the same seed gives every algorithm the same stream
        params: Placement parameters shared by all runs
        workers: Worker processes; 1 runs in-process

    Returns:
        Results ordered by algorithm (as given), then seed (as given)
    """
    if not algorithms or not seeds:
        raise ValueError("sweep needs at least one algorithm and one seed")
    params = params or PlacementParams()
    jobs = [(net_config, scenario, Algorithm(a), int(s), params) for a in algorithms for s in seeds]
    logger.info(f"Sweep: {len(algorithms)} algorithm(s) x {len(seeds)} seed(s), {workers} worker(s)")

    progress = dict(total=len(jobs), desc=f"sweep {scenario.kind.value}", unit="run",
                    disable=len(jobs) == 1)
    if workers <= 1:
        return [_run_job(job) for job in tqdm(jobs, **progress)]
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(tqdm(executor.map(_run_job, jobs), **progress))
