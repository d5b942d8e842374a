#!/usr/bin/env python3
"""
Greedy-Bisection Multipath Placement (GBMP)
Per stage: keep the stage on the previous stage's hosts when they still
have the CPU, otherwise rank ECNs by node weight and keep the top MP.
A single instance goes on the best one when that keeps it at or below the
ECN mean after placement; otherwise the stage is split over the candidates
with the min-max bisection solver. Instance pairs are routed over their
hop-shortest paths, most bandwidth per hop first. When the last stage
cannot reach the egress it is placed again as a split that accounts for
the egress links.
"""

import logging
import math
from typing import List, Optional

import numpy as np

from ..chain.types import ServiceChainRequest
from ..network.topology import PhysicalNetwork
from ..solvers.bisection import greedy_bisection_minmax
from ..solvers.types import SplitCandidate, SplitProblem
from .state import (
    PlacementRejected,
    PlanBuilder,
    Planner,
    WorkingState,
    routable_bandwidth,
    route_boundary,
    transport,
)
from .types import PlacementOutcome, PlacementParams, RejectReason
from .weights import build_candidate_set

logger = logging.getLogger(__name__)

# split ratios below this are dropped rather than becoming dust instances
MIN_SHARE = 1e-9


class GbmpPlanner(Planner):
    """Weight-ranked candidates plus min-max load splitting"""

    name = "GBMP"

    def _candidates(self, req: ServiceChainRequest, state: WorkingState,
                    builder: PlanBuilder, stage: int, toward_egress: bool) -> List[int]:
        anchors = list(builder.hosts[-1])
        if toward_egress:
            anchors.append(req.egress)
        candidates = build_candidate_set(
            state.net, stage, anchors, state.residual_cpu, state.residual_bw,
            self.params.pool_size,
        )
        if not candidates.nodes:
            raise PlacementRejected(RejectReason.NO_CAPACITY, f"stage {stage}: no ECN has CPU left")
        return candidates.nodes

    def _reuse_previous(self, req: ServiceChainRequest, state: WorkingState,
                        builder: PlanBuilder) -> bool:
        """Stack the next stage on the previous hosts with the same shares"""
        hosts, shares = builder.hosts[-1], builder.shares[-1]
        if any(state.residual_cpu[h] < req.cpu_demand * s for h, s in zip(hosts, shares)):
            return False
        stage = builder.add_stage(hosts, shares)
        route_boundary(state, builder, stage - 1, np.diag(shares), self.params.max_paths)
        for host, share in zip(hosts, shares):
            state.reserve_cpu(host, req.cpu_demand * share)
        return True

    def _try_single(self, req: ServiceChainRequest, state: WorkingState,
                    builder: PlanBuilder, host: int) -> bool:
        """Place the whole stage on ``host`` if its flows can be routed there"""
        ratios = transport(builder.shares[-1], [1.0], builder.hosts[-1], [host], state.net)
        saved = state.checkpoint(), builder.checkpoint()
        stage = builder.add_stage([host], [1.0])
        try:
            route_boundary(state, builder, stage - 1, ratios, self.params.max_paths)
        except PlacementRejected:
            state.restore(saved[0])
            builder.restore(saved[1])
            return False
        state.reserve_cpu(host, req.cpu_demand)
        return True

    def _split(self, req: ServiceChainRequest, state: WorkingState,
               builder: PlanBuilder, nodes: List[int], toward_egress: bool = False):
        """Split the stage over ``nodes`` by min-max bisection and route it"""
        prev_hosts = builder.hosts[-1]
        prev_shares = builder.shares[-1]
        candidates = []
        for node_id in nodes:
            reachable = math.fsum(
                min(share, routable_bandwidth(state, host, node_id, self.params.max_paths)
                    / req.bandwidth_demand)
                for host, share in zip(prev_hosts, prev_shares)
            )
            if toward_egress:
                reachable = min(reachable, routable_bandwidth(
                    state, node_id, req.egress, self.params.max_paths) / req.bandwidth_demand)
            capacity = state.net.nodes[node_id].compute_capacity
            candidates.append(SplitCandidate(
                load=max(0.0, state.used_cpu(node_id)),
                capacity=capacity,
                link_cap=req.cpu_demand * min(1.0, reachable),
            ))

        problem = SplitProblem(candidates=candidates, demand=req.cpu_demand)
        solution = greedy_bisection_minmax(problem, tol=self.params.bisection_tol * req.cpu_demand,
                                           mode=self.params.load_mode)
        if not solution.feasible:
            total_cpu = math.fsum(state.residual_cpu[n] for n in nodes)
            reason = RejectReason.NO_CAPACITY if total_cpu < req.cpu_demand else RejectReason.NO_PATH
            raise PlacementRejected(reason, solution.reason or "split infeasible")

        kept = [(n, r) for n, r in zip(nodes, solution.ratios) if r > MIN_SHARE]
        total = math.fsum(r for _, r in kept)
        hosts = [n for n, _ in kept]
        shares = [r / total for _, r in kept]
        logger.debug(f"GBMP chain {req.id} stage {builder.stage + 1}: split {dict(zip(hosts, shares))}")

        ratios = transport(prev_shares, shares, prev_hosts, hosts, state.net)
        stage = builder.add_stage(hosts, shares)
        route_boundary(state, builder, stage - 1, ratios, self.params.max_paths)
        for host, share in zip(hosts, shares):
            state.reserve_cpu(host, req.cpu_demand * share)

    def _route_to_egress(self, req: ServiceChainRequest, state: WorkingState,
                         builder: PlanBuilder):
        ratios = transport(builder.shares[-1], [1.0], builder.hosts[-1], [req.egress], state.net)
        builder.add_egress()
        route_boundary(state, builder, req.chain_length, ratios, self.params.max_paths)

    def build(self, req: ServiceChainRequest, net: PhysicalNetwork,
              state: WorkingState, builder: PlanBuilder):
        last = req.chain_length
        before_last = None
        for stage in range(1, last + 1):
            if stage == last:
                before_last = state.checkpoint(), builder.checkpoint()
            if stage > 1 and self._reuse_previous(req, state, builder):
                logger.debug(f"GBMP chain {req.id} stage {stage}: stacked on {builder.hosts[-1]}")
                continue

            nodes = self._candidates(req, state, builder, stage, toward_egress=stage in (1, last))
            best = nodes[0]
            capacity = net.nodes[best].compute_capacity
            after = (state.used_cpu(best) + req.cpu_demand) / capacity
            mean_after = state.mean_ecn_utilization() + \
                req.cpu_demand / capacity / len(state.residual_cpu)
            fits = state.residual_cpu[best] >= req.cpu_demand
            if fits and after <= mean_after and self._try_single(req, state, builder, best):
                logger.debug(f"GBMP chain {req.id} stage {stage}: single instance on {best}")
                continue
            self._split(req, state, builder, nodes)

        try:
            self._route_to_egress(req, state, builder)
        except PlacementRejected as e:
            logger.debug(f"GBMP chain {req.id}: egress unreachable ({e.detail}), re-splitting stage {last}")
            state.restore(before_last[0])
            builder.restore(before_last[1])
            nodes = self._candidates(req, state, builder, last, toward_egress=True)
            self._split(req, state, builder, nodes, toward_egress=True)
            self._route_to_egress(req, state, builder)


def gbmp_deploy(req: ServiceChainRequest, net: PhysicalNetwork,
                params: Optional[PlacementParams] = None) -> PlacementOutcome:
    """Deploy one request with GBMP; accepted plans are applied to ``net``"""
    return GbmpPlanner(params).deploy(req, net)
