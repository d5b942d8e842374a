#!/usr/bin/env python3
"""
Planning Scaffolding Shared by the Deployment Algorithms
Residual-resource bookkeeping while a plan is built, multipath routing of
one instance pair, greedy flow mapping between stages, plan assembly, and
the finalize step (feasibility check, then apply).
"""

import logging
import math
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .. import settings
from ..chain.accounting import apply_plan
from ..chain.feasibility import Constraint, check_feasibility
from ..chain.types import (
    DeploymentPlan,
    Route,
    ServiceChainRequest,
    SplitRatios,
    VnfInstance,
)
from ..network.algorithms import candidate_routes, hop_distance
from ..network.topology import PhysicalNetwork
from ..network.types import LinkId, NodeId, Path
from .types import PlacementOutcome, PlacementParams, RejectReason

logger = logging.getLogger(__name__)


class PlacementRejected(Exception):
    """Internal signal: the plan under construction cannot be completed"""

    def __init__(self, reason: RejectReason, detail: str = ""):
        super().__init__(detail)
        self.reason = reason
        self.detail = detail


class WorkingState:
    """Residual CPU, bandwidth and flow-table entries while one plan is built"""

    def __init__(self, net: PhysicalNetwork):
        self.net = net
        self.residual_cpu: Dict[NodeId, float] = {
            n: net.nodes[n].compute_capacity - net.nodes[n].compute_load for n in net.ecn_ids
        }
        self.residual_bw: Dict[LinkId, float] = {
            l: link.bandwidth - link.load for l, link in sorted(net.links.items())
        }
        self.residual_entries: Dict[NodeId, float] = {
            n: net.nodes[n].switch_capacity - net.nodes[n].switch_load for n in net.switch_ids
        }

    def used_cpu(self, node_id: NodeId) -> float:
        return self.net.nodes[node_id].compute_capacity - self.residual_cpu[node_id]

    def ecn_utilization(self, node_id: NodeId) -> float:
        return self.used_cpu(node_id) / self.net.nodes[node_id].compute_capacity

    def mean_ecn_utilization(self) -> float:
        return float(np.mean([self.ecn_utilization(n) for n in self.residual_cpu]))

    def reserve_cpu(self, node_id: NodeId, amount: float):
        self.residual_cpu[node_id] -= amount

    def checkpoint(self) -> Tuple[Dict, Dict, Dict]:
        return dict(self.residual_cpu), dict(self.residual_bw), dict(self.residual_entries)

    def restore(self, saved: Tuple[Dict, Dict, Dict]):
        cpu, bandwidth, entries = saved
        self.residual_cpu = dict(cpu)
        self.residual_bw = dict(bandwidth)
        self.residual_entries = dict(entries)

    def bottleneck(self, path: Path) -> float:
        """Residual bandwidth of the path's narrowest link (infinite for co-located hosts)"""
        return min((self.residual_bw[l] for l in path.link_sequence), default=math.inf)

    def has_entries(self, path: Path) -> bool:
        """Every switching node on the path can take one more flow entry"""
        return all(self.residual_entries.get(n, math.inf) >= 1.0 for n in path.node_sequence)

    def reserve_path(self, path: Path, bandwidth: float):
        for link_id in path.link_sequence:
            self.residual_bw[link_id] -= bandwidth
        if path.hops:
            for node_id in path.node_sequence:
                if node_id in self.residual_entries:
                    self.residual_entries[node_id] -= 1.0

    def release_path(self, path: Path, bandwidth: float):
        for link_id in path.link_sequence:
            self.residual_bw[link_id] += bandwidth
        if path.hops:
            for node_id in path.node_sequence:
                if node_id in self.residual_entries:
                    self.residual_entries[node_id] += 1.0


def routable_bandwidth(state: WorkingState, src: NodeId, dst: NodeId, max_paths: int) -> float:
    """How much route_flow could push from src to dst right now"""
    if src == dst:
        return math.inf
    residual = dict(state.residual_bw)
    total = 0.0
    for path in candidate_routes(state.net, src, dst, max_paths):
        if not state.has_entries(path):
            continue
        width = min(residual[l] for l in path.link_sequence)
        if width <= 0:
            continue
        for link_id in path.link_sequence:
            residual[link_id] -= width
        total += width
    return total


def route_flow(state: WorkingState, src: NodeId, dst: NodeId, bandwidth: float,
               max_paths: int) -> Optional[List[Route]]:
    """
    Route one instance pair's flow over up to ``max_paths`` hop-shortest paths

    Paths are filled by bandwidth per hop, then widest first, spilling onto
    the next one when a path is full. On success the routes are reserved in ``state``; on failure the
    state is left as it was.

    Returns:
        The routes, or None when the pair cannot carry ``bandwidth``
    """
    if src == dst:
        return [Route(path=Path.trivial(src), bandwidth=bandwidth)]

    paths = [p for p in candidate_routes(state.net, src, dst, max_paths) if state.has_entries(p)]
    routes: List[Route] = []
    remaining = bandwidth
    slack = settings.FLOW_EPS * max(bandwidth, 1.0)
    while remaining > 0 and paths:
        # stable sort keeps hop order among equals
        paths.sort(key=lambda p: (-state.bottleneck(p) / max(1, p.hops), -state.bottleneck(p)))
        path = paths.pop(0)
        width = state.bottleneck(path)
        if width <= 0:
            break
        amount = min(width, remaining)
        state.reserve_path(path, amount)
        routes.append(Route(path=path, bandwidth=amount))
        remaining -= amount
        paths = [p for p in paths if state.has_entries(p)]

    if remaining > slack or not routes:
        for route in routes:
            state.release_path(route.path, route.bandwidth)
        return None
    if remaining > 0:
        routes[-1].bandwidth += remaining
        for link_id in routes[-1].path.link_sequence:
            state.residual_bw[link_id] -= remaining
    return routes


def transport(supply: Sequence[float], demand: Sequence[float], sources: Sequence[NodeId],
              targets: Sequence[NodeId], net: PhysicalNetwork) -> np.ndarray:
    """
    Greedy flow mapping between two consecutive stages

    Co-located pairs are matched first, then pairs by ascending hop
    distance (ties by index). Supplies and demands are shares of the same
    total flow.
    """
    supply_left = [float(s) for s in supply]
    demand_left = [float(d) for d in demand]
    ratios = np.zeros((len(supply), len(demand)))
    pairs = sorted(
        ((0 if sources[i] == targets[j] else 1, hop_distance(net, sources[i], targets[j]), i, j)
         for i in range(len(supply)) for j in range(len(demand))),
    )
    for _, _, i, j in pairs:
        amount = min(supply_left[i], demand_left[j])
        if amount <= 0:
            continue
        ratios[i, j] += amount
        supply_left[i] -= amount
        demand_left[j] -= amount
    return ratios


class PlanBuilder:
    """Accumulates instances, split matrices and routes stage by stage"""

    def __init__(self, req: ServiceChainRequest):
        self.req = req
        self.instances: List[VnfInstance] = []
        self.boundaries: List[np.ndarray] = []
        self.routes: Dict = {}
        self.hosts: List[List[NodeId]] = [[req.ingress]]
        self.shares: List[List[float]] = [[1.0]]

    @property
    def stage(self) -> int:
        """Index of the last stage added (0 = ingress)"""
        return len(self.hosts) - 1

    def add_stage(self, hosts: Sequence[NodeId], shares: Sequence[float]) -> int:
        """Add the next stage's instances; allocated CPU is the workload share"""
        stage = self.stage + 1
        for index, (host, share) in enumerate(zip(hosts, shares)):
            self.instances.append(VnfInstance(
                chain_id=self.req.id, stage=stage, index=index, host=host,
                allocated_cpu=self.req.cpu_demand * share, share=share,
            ))
        self.hosts.append(list(hosts))
        self.shares.append(list(shares))
        return stage

    def add_egress(self):
        self.hosts.append([self.req.egress])
        self.shares.append([1.0])

    def checkpoint(self) -> tuple:
        routes = {key: list(value) for key, value in self.routes.items()}
        return len(self.instances), len(self.boundaries), routes, len(self.hosts)

    def restore(self, saved: tuple):
        """Drop everything added after ``saved`` was taken"""
        instances, boundaries, routes, stages = saved
        del self.instances[instances:]
        del self.boundaries[boundaries:]
        self.routes = {key: list(value) for key, value in routes.items()}
        del self.hosts[stages:]
        del self.shares[stages:]

    def set_boundary(self, boundary: int, ratios: np.ndarray):
        if boundary != len(self.boundaries):
            raise ValueError(f"Boundary {boundary} set out of order")
        self.boundaries.append(np.asarray(ratios, dtype=float))

    def add_routes(self, boundary: int, j: int, j_next: int, routes: List[Route]):
        self.routes.setdefault((boundary, j, j_next), []).extend(routes)

    def build(self) -> DeploymentPlan:
        return DeploymentPlan(
            chain_id=self.req.id,
            ingress=self.req.ingress,
            egress=self.req.egress,
            instances=list(self.instances),
            splits=SplitRatios(boundaries=list(self.boundaries)),
            routes=dict(self.routes),
        )


def route_boundary(state: WorkingState, builder: PlanBuilder, boundary: int,
                   ratios: np.ndarray, max_paths: int):
    """Route every positive pair of one boundary, or raise PlacementRejected"""
    sources = builder.hosts[boundary]
    targets = builder.hosts[boundary + 1]
    for j in range(ratios.shape[0]):
        for j_next in range(ratios.shape[1]):
            if ratios[j, j_next] <= settings.FLOW_EPS:
                continue
            bandwidth = float(ratios[j, j_next]) * builder.req.bandwidth_demand
            src, dst = sources[j], targets[j_next]
            routes = route_flow(state, src, dst, bandwidth, max_paths)
            if routes is None:
                if src != dst and not candidate_routes(state.net, src, dst, max_paths):
                    raise PlacementRejected(RejectReason.NO_PATH, f"no path {src}->{dst}")
                raise PlacementRejected(
                    RejectReason.NO_CAPACITY, f"{src}->{dst} cannot carry {bandwidth:.6g} bps"
                )
            builder.add_routes(boundary, j, j_next, routes)
    builder.set_boundary(boundary, ratios)


_REASONS = {
    Constraint.C3_DELAY: RejectReason.DELAY_VIOLATION,
}


def finalize(name: str, builder: PlanBuilder, net: PhysicalNetwork) -> PlacementOutcome:
    """Check the assembled plan and apply it, or reject with the worst violation"""
    plan = builder.build()
    violations = check_feasibility(plan, builder.req, net)
    if violations:
        reasons = {_REASONS.get(v.constraint, RejectReason.NO_CAPACITY) for v in violations}
        reason = RejectReason.NO_CAPACITY if RejectReason.NO_CAPACITY in reasons else reasons.pop()
        for v in violations:
            if v.constraint == Constraint.C4_INTEGRALITY:
                logger.error(f"{name} built a malformed plan for chain {plan.chain_id}: {v.detail}")
        logger.info(
            f"{name} rejected chain {plan.chain_id}: {reason.value} ({violations[0].entity}: "
            f"{violations[0].detail})"
        )
        return PlacementOutcome.reject(reason, violations[0].detail)
    apply_plan(net, plan)
    logger.info(
        f"{name} accepted chain {plan.chain_id}: {len(plan.instances)} instance(s), "
        f"{len(plan.all_routes())} route(s)"
    )
    return PlacementOutcome.accept(plan)


class Planner:
    """
    Base class of the deployment algorithms

    Subclasses fill a PlanBuilder against a WorkingState in ``build`` and
    raise PlacementRejected when they cannot; ``deploy`` turns that into a
    PlacementOutcome and applies accepted plans.
    """

    name = "planner"

    def __init__(self, params: Optional[PlacementParams] = None):
        self.params = params or PlacementParams()

    def build(self, req: ServiceChainRequest, net: PhysicalNetwork,
              state: WorkingState, builder: PlanBuilder):
        raise NotImplementedError

    def deploy(self, req: ServiceChainRequest, net: PhysicalNetwork) -> PlacementOutcome:
        if not net.ecn_ids:
            return PlacementOutcome.reject(RejectReason.NO_CAPACITY, "network has no ECN")
        state = WorkingState(net)
        builder = PlanBuilder(req)
        try:
            self.build(req, net, state, builder)
        except PlacementRejected as e:
            logger.info(f"{self.name} rejected chain {req.id}: {e.reason.value} ({e.detail})")
            return PlacementOutcome.reject(e.reason, e.detail)
        return finalize(self.name, builder, net)
