#!/usr/bin/env python3
"""
K-Shortest-Path Multipath Placement (KSMP)
Per stage and per upstream instance: rank (path, ECN) options with Yen's
algorithm on a cost graph whose links cost a hop charge plus their consumed
bandwidth fraction, reaching candidate ECNs through a virtual sink edge that
costs the ECN's utilization. The min-cost split over the options is solved
as an LP with the simplex solver.
"""

import logging
import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from .. import settings
from ..chain.types import Route, ServiceChainRequest
from ..network.algorithms import path_from_nodes, ranked_simple_paths
from ..network.topology import PhysicalNetwork
from ..network.types import LinkKind, NodeId, Path
from ..solvers.simplex import simplex_min_cost
from ..solvers.types import SharedCap, SplitCandidate, SplitProblem
from .state import PlacementRejected, PlanBuilder, Planner, WorkingState
from .types import PlacementOutcome, PlacementParams, RejectReason

logger = logging.getLogger(__name__)

SINK = -1


@dataclass
class PathOption:
    """One way to carry an upstream instance's flow"""
    path: Path
    endpoint: NodeId
    cost: float


class KsmpPlanner(Planner):
    """Cost-ranked paths plus min-cost LP splitting"""

    name = "KSMP"

    def cost_graph(self, state: WorkingState,
                   sink_targets: Optional[Sequence[NodeId]] = None) -> nx.Graph:
        """
        Optical links weighted hop_cost + (B - b) / B, plus optional sink edges

        Each ECN in ``sink_targets`` gets an edge to SINK costing u / C.
        """
        net = state.net
        graph = nx.Graph()
        graph.add_nodes_from(sorted(net.nodes))
        for link_id, link in sorted(net.links.items()):
            if link.kind != LinkKind.OPTICAL:
                continue
            consumed = min(1.0, max(0.0, (link.bandwidth - state.residual_bw[link_id]) / link.bandwidth))
            graph.add_edge(*link.endpoints, link_id=link_id,
                           cost=self.params.ksmp_hop_cost + consumed)
        if sink_targets is not None:
            for node_id in sink_targets:
                graph.add_edge(node_id, SINK, link_id=None,
                               cost=min(1.0, max(0.0, state.ecn_utilization(node_id))))
        return graph

    def _options_to_sink(self, state: WorkingState, src: NodeId, allowed: Sequence[NodeId],
                         chosen: Sequence[NodeId]) -> List[PathOption]:
        graph = self.cost_graph(state, allowed)
        mp = self.params.max_paths
        options: List[PathOption] = []
        fresh: List[NodeId] = []
        for cost, nodes in ranked_simple_paths(graph, src, SINK, mp):
            endpoint = nodes[-2]
            if endpoint not in chosen and endpoint not in fresh:
                if len(chosen) + len(fresh) >= mp:
                    continue
                fresh.append(endpoint)
            options.append(PathOption(path_from_nodes(state.net, nodes[:-1], cost), endpoint, cost))
        return options

    def _options_to_egress(self, state: WorkingState, src: NodeId,
                           egress: NodeId) -> List[PathOption]:
        if src == egress:
            return [PathOption(Path.trivial(src), egress, 0.0)]
        graph = self.cost_graph(state)
        return [
            PathOption(path_from_nodes(state.net, nodes, cost), egress, cost)
            for cost, nodes in ranked_simple_paths(graph, src, egress, self.params.max_paths)
        ]

    def _solve(self, req: ServiceChainRequest, state: WorkingState, options: List[PathOption],
               demand: float, charge_cpu: bool) -> List[Tuple[PathOption, float]]:
        """Min-cost split of ``demand`` (a flow fraction) over the options"""
        candidates = []
        for option in options:
            link_cap = state.bottleneck(option.path) / req.bandwidth_demand
            if not state.has_entries(option.path):
                link_cap = 0.0
            capacity = (max(0.0, state.residual_cpu[option.endpoint]) / req.cpu_demand
                        if charge_cpu else math.inf)
            candidates.append(SplitCandidate(load=0.0, capacity=capacity,
                                             unit_cost=option.cost, link_cap=max(0.0, link_cap)))

        by_endpoint: Dict[NodeId, List[int]] = defaultdict(list)
        by_link: Dict[int, List[int]] = defaultdict(list)
        for index, option in enumerate(options):
            by_endpoint[option.endpoint].append(index)
            for link_id in option.path.link_sequence:
                by_link[link_id].append(index)
        shared = []
        if charge_cpu:
            shared.extend(
                SharedCap(members, max(0.0, state.residual_cpu[node_id]) / req.cpu_demand)
                for node_id, members in sorted(by_endpoint.items()) if len(members) > 1
            )
        shared.extend(
            SharedCap(members, max(0.0, state.residual_bw[link_id]) / req.bandwidth_demand)
            for link_id, members in sorted(by_link.items()) if len(members) > 1
        )

        solution = simplex_min_cost(SplitProblem(candidates=candidates, demand=demand,
                                                 shared_caps=shared))
        if not solution.feasible:
            raise PlacementRejected(RejectReason.LP_INFEASIBLE,
                                    f"no feasible split over {len(options)} path(s)")
        kept = [(o, r) for o, r in zip(options, solution.ratios) if r > settings.FLOW_EPS]
        total = math.fsum(r for _, r in kept)
        return [(o, demand * r / total) for o, r in kept]

    def _route_stage(self, req: ServiceChainRequest, state: WorkingState, builder: PlanBuilder,
                     to_egress: bool):
        prev_hosts = builder.hosts[-1]
        prev_shares = builder.shares[-1]
        mp = self.params.max_paths
        endpoints: List[NodeId] = []
        flows: Dict[Tuple[int, NodeId], List[Route]] = defaultdict(list)
        amounts: Dict[Tuple[int, NodeId], float] = defaultdict(float)

        for j, (host, share) in enumerate(zip(prev_hosts, prev_shares)):
            if to_egress:
                options = self._options_to_egress(state, host, req.egress)
            else:
                pool = endpoints if len(endpoints) >= mp else state.net.ecn_ids
                allowed = [n for n in pool if state.residual_cpu[n] > 0]
                if not allowed:
                    raise PlacementRejected(RejectReason.NO_CAPACITY, "no ECN has CPU left")
                options = self._options_to_sink(state, host, allowed, endpoints)
            if not options:
                raise PlacementRejected(RejectReason.NO_PATH, f"no path from {host}")

            for option, flow in self._solve(req, state, options, share, charge_cpu=not to_egress):
                bandwidth = flow * req.bandwidth_demand
                state.reserve_path(option.path, bandwidth)
                if not to_egress:
                    state.reserve_cpu(option.endpoint, flow * req.cpu_demand)
                if option.endpoint not in endpoints:
                    endpoints.append(option.endpoint)
                flows[(j, option.endpoint)].append(Route(path=option.path, bandwidth=bandwidth))
                amounts[(j, option.endpoint)] += flow

        ratios = np.zeros((len(prev_hosts), len(endpoints)))
        for (j, endpoint), flow in amounts.items():
            ratios[j, endpoints.index(endpoint)] = flow
        boundary = builder.stage
        if to_egress:
            builder.add_egress()
        else:
            shares = [float(s) for s in ratios.sum(axis=0)]
            builder.add_stage(endpoints, shares)
            logger.debug(f"KSMP chain {req.id} stage {builder.stage}: "
                         f"{dict(zip(endpoints, shares))}")
        for (j, endpoint), routes in sorted(flows.items()):
            builder.add_routes(boundary, j, endpoints.index(endpoint), routes)
        builder.set_boundary(boundary, ratios)

    def build(self, req: ServiceChainRequest, net: PhysicalNetwork,
              state: WorkingState, builder: PlanBuilder):
        for _ in range(req.chain_length):
            self._route_stage(req, state, builder, to_egress=False)
        self._route_stage(req, state, builder, to_egress=True)


def ksmp_deploy(req: ServiceChainRequest, net: PhysicalNetwork,
                params: Optional[PlacementParams] = None) -> PlacementOutcome:
    """Deploy one request with KSMP; accepted plans are applied to ``net``"""
    return KsmpPlanner(params).deploy(req, net)
