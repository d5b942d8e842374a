"""
Equal-cost multipath baseline (ECMP)

One instance per stage on the best-weight ECN that can take the whole
stage; every hop's flow is divided equally over all minimum-hop paths,
whatever their load. Overloads surface in the final feasibility check.
"""

import logging
from typing import Optional

import numpy as np

from ..chain.types import Route, ServiceChainRequest
from ..network.algorithms import equal_cost_paths
from ..network.topology import PhysicalNetwork
from .state import PlacementRejected, PlanBuilder, Planner, WorkingState
from .types import PlacementOutcome, PlacementParams, RejectReason
from .weights import build_candidate_set

logger = logging.getLogger(__name__)


class EcmpPlanner(Planner):
    name = "ECMP"

    def _split_equally(self, req: ServiceChainRequest, state: WorkingState,
                       builder: PlanBuilder, src: int, dst: int):
        paths = equal_cost_paths(state.net, src, dst)
        if not paths:
            raise PlacementRejected(RejectReason.NO_PATH, f"no path {src}->{dst}")
        share = req.bandwidth_demand / len(paths)
        routes = [Route(path=path, bandwidth=share) for path in paths]
        for route in routes:
            state.reserve_path(route.path, route.bandwidth)
        boundary = builder.stage - 1
        builder.add_routes(boundary, 0, 0, routes)
        builder.set_boundary(boundary, np.ones((1, 1)))

    def build(self, req: ServiceChainRequest, net: PhysicalNetwork,
              state: WorkingState, builder: PlanBuilder):
        for stage in range(1, req.chain_length + 1):
            candidates = build_candidate_set(
                net, stage, builder.hosts[-1], state.residual_cpu, state.residual_bw,
                size=1, min_cpu=req.cpu_demand,
            )
            if not candidates.nodes:
                raise PlacementRejected(RejectReason.NO_CAPACITY,
                                        f"stage {stage}: no ECN fits {req.cpu_demand:.6g} cycles")
            host = candidates.nodes[0]
            src = builder.hosts[-1][0]
            builder.add_stage([host], [1.0])
            state.reserve_cpu(host, req.cpu_demand)
            self._split_equally(req, state, builder, src, host)

        src = builder.hosts[-1][0]
        builder.add_egress()
        self._split_equally(req, state, builder, src, req.egress)


def ecmp_deploy(req: ServiceChainRequest, net: PhysicalNetwork,
                params: Optional[PlacementParams] = None) -> PlacementOutcome:
    """Deploy one request with ECMP; accepted plans are applied to ``net``"""
    return EcmpPlanner(params).deploy(req, net)
