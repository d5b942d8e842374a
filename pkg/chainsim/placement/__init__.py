"""
Deployment algorithms: GBMP, KSMP and the ECMP / ILPS baselines
"""

from typing import Dict, Optional, Type, Union

from ..chain.types import ServiceChainRequest
from ..network.topology import PhysicalNetwork
from .types import Algorithm, CandidateSet, PlacementOutcome, PlacementParams, RejectReason
from .state import (
    PlanBuilder,
    Planner,
    WorkingState,
    route_flow,
    transport,
)
from .weights import build_candidate_set, node_weight, weight_formula
from .gbmp import GbmpPlanner, gbmp_deploy
from .ksmp import KsmpPlanner, ksmp_deploy
from .ecmp import EcmpPlanner, ecmp_deploy
from .ilps import IlpsPlanner, ilps_deploy

PLANNERS: Dict[Algorithm, Type[Planner]] = {
    Algorithm.GBMP: GbmpPlanner,
    Algorithm.KSMP: KsmpPlanner,
    Algorithm.ECMP: EcmpPlanner,
    Algorithm.ILPS: IlpsPlanner,
}


def deploy(algorithm: Union[Algorithm, str], req: ServiceChainRequest, net: PhysicalNetwork,
           params: Optional[PlacementParams] = None) -> PlacementOutcome:
    """Run one algorithm on one request; accepted plans are applied to ``net``"""
    return PLANNERS[Algorithm(algorithm)](params).deploy(req, net)


__all__ = [
    "Algorithm",
    "CandidateSet",
    "PlacementOutcome",
    "PlacementParams",
    "RejectReason",
    "PlanBuilder",
    "Planner",
    "WorkingState",
    "route_flow",
    "transport",
    "build_candidate_set",
    "node_weight",
    "weight_formula",
    "GbmpPlanner",
    "KsmpPlanner",
    "EcmpPlanner",
    "IlpsPlanner",
    "gbmp_deploy",
    "ksmp_deploy",
    "ecmp_deploy",
    "ilps_deploy",
    "PLANNERS",
    "deploy",
]
