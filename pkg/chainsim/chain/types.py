"""
Shared types and dataclasses for the chain module
"""

import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np

from .. import settings
from ..network.types import LinkId, NodeId, Path


@dataclass(frozen=True)
class VnfKind:
    """A network function type from the catalog (FW, DPI, NAT, ...)"""
    label: str

    def __post_init__(self):
        if not self.label:
            raise ValueError("VNF kind needs a label")


DEFAULT_VNF_CATALOG: Tuple[VnfKind, ...] = tuple(VnfKind(label) for label in settings.VNF_CATALOG)


@dataclass
class ServiceChainRequest:
    """One service chain: ingress, egress, ordered VNFs and its demands"""
    id: int
    ingress: NodeId
    egress: NodeId
    vnf_sequence: Tuple[VnfKind, ...]
    cpu_demand: float  # cycles per stage
    data_size: float  # bytes
    bandwidth_demand: float  # bits/sec
    delay_bound: float  # seconds

    def __post_init__(self):
        self.vnf_sequence = tuple(self.vnf_sequence)
        if not self.vnf_sequence:
            raise ValueError(f"Request {self.id} needs at least one VNF")
        if self.ingress == self.egress:
            raise ValueError(f"Request {self.id} has identical ingress and egress")
        for name in ("cpu_demand", "data_size", "bandwidth_demand", "delay_bound"):
            if getattr(self, name) <= 0:
                raise ValueError(f"Request {self.id}: {name} must be positive")

    @property
    def chain_length(self) -> int:
        return len(self.vnf_sequence)


@dataclass
class VnfInstance:
    """The j-th instance of stage m of a chain, pinned to one ECN"""
    chain_id: int
    stage: int  # 1..M
    index: int
    host: NodeId
    allocated_cpu: float  # cycles/sec charged to the host
    share: float = 1.0  # fraction of the stage workload


@dataclass
class Route:
    """One sub-flow of an instance pair over a single path"""
    path: Path
    bandwidth: float


@dataclass
class SplitRatios:
    """
    Flow split between adjacent stages

    ``boundaries[b]`` is the matrix from stage b to stage b + 1, with stage
    0 the ingress and stage M + 1 the egress (one virtual instance each).
    Entries are absolute fractions of the chain's total flow.
    """
    boundaries: List[np.ndarray]

    def stage_shares(self, stage: int) -> np.ndarray:
        """Share of the total flow each instance of ``stage`` handles"""
        if stage == 0:
            return self.boundaries[0].sum(axis=1)
        return self.boundaries[stage - 1].sum(axis=0)

    def conservation_error(self) -> float:
        """Largest mismatch between inflow and outflow at any instance"""
        worst = abs(float(self.boundaries[0].sum()) - 1.0)
        for b in range(len(self.boundaries) - 1):
            inflow = self.boundaries[b].sum(axis=0)
            outflow = self.boundaries[b + 1].sum(axis=1)
            if inflow.shape != outflow.shape:
                return math.inf
            worst = max(worst, float(np.max(np.abs(inflow - outflow))))
        return worst


RouteKey = Tuple[int, int, int]  # (boundary, upstream index, downstream index)


@dataclass
class DeploymentPlan:
    """Placement, split ratios and routed sub-flows of one accepted chain"""
    chain_id: int
    ingress: NodeId
    egress: NodeId
    instances: List[VnfInstance]
    splits: SplitRatios
    routes: Dict[RouteKey, List[Route]] = field(default_factory=dict)

    @property
    def num_stages(self) -> int:
        return len(self.splits.boundaries) - 1

    def stage_instances(self, stage: int) -> List[VnfInstance]:
        return sorted((i for i in self.instances if i.stage == stage), key=lambda i: i.index)

    def endpoint_host(self, stage: int, index: int) -> NodeId:
        """Host of an instance, with the ingress/egress as virtual stages"""
        if stage == 0:
            return self.ingress
        if stage == self.num_stages + 1:
            return self.egress
        for instance in self.instances:
            if instance.stage == stage and instance.index == index:
                return instance.host
        raise KeyError(f"Chain {self.chain_id} has no instance {index} at stage {stage}")

    def all_routes(self) -> List[Route]:
        return [route for key in sorted(self.routes) for route in self.routes[key]]

    def cpu_by_host(self) -> Dict[NodeId, float]:
        totals: Dict[NodeId, List[float]] = defaultdict(list)
        for instance in self.instances:
            totals[instance.host].append(instance.allocated_cpu)
        return {host: math.fsum(values) for host, values in sorted(totals.items())}

    def bandwidth_by_link(self) -> Dict[LinkId, float]:
        totals: Dict[LinkId, List[float]] = defaultdict(list)
        for route in self.all_routes():
            for link_id in route.path.link_sequence:
                totals[link_id].append(route.bandwidth)
        return {link_id: math.fsum(values) for link_id, values in sorted(totals.items())}

    def entries_by_node(self) -> Dict[NodeId, float]:
        """Flow-table entries: one per sub-flow per traversed node (switches filter later)"""
        totals: Dict[NodeId, float] = defaultdict(float)
        for route in self.all_routes():
            if route.bandwidth <= 0:
                continue
            for node_id in route.path.node_sequence:
                totals[node_id] += 1.0
        return dict(sorted(totals.items()))


@dataclass
class LoadBalanceIndicators:
    """Imbalance of ECNs, links and switches plus the weighted composite"""
    lbi_c: float
    lbi_n: float
    lbi_s: float
    composite: float
    link_peak_ratio: float = 1.0  # max/mean link utilization

    def as_tuple(self) -> Tuple[float, float, float]:
        return (self.lbi_c, self.lbi_n, self.lbi_s)


@dataclass
class ObjectiveWeights:
    """alpha, beta, gamma of the composite objective"""
    alpha: float = settings.OBJECTIVE_WEIGHTS[0]
    beta: float = settings.OBJECTIVE_WEIGHTS[1]
    gamma: float = settings.OBJECTIVE_WEIGHTS[2]

    def __post_init__(self):
        if min(self.alpha, self.beta, self.gamma) < 0:
            raise ValueError("Objective weights must be nonnegative")
        if self.alpha + self.beta + self.gamma <= 0:
            raise ValueError("At least one objective weight must be positive")


class DelayModel:
    """Transit time per link and execution time per VNF instance"""

    @staticmethod
    def transit(data_bytes: float, bandwidth: float, prop_delay: float) -> float:
        return data_bytes * 8.0 / bandwidth + prop_delay

    @staticmethod
    def execution(cpu_cycles: float, allocated_cpu: float) -> float:
        if allocated_cpu <= 0:
            raise ValueError("allocated_cpu must be positive")
        return cpu_cycles / allocated_cpu


def trivial_splits(num_stages: int) -> SplitRatios:
    """Single instance per stage, all flow along one chain of instances"""
    return SplitRatios(boundaries=[np.ones((1, 1)) for _ in range(num_stages + 1)])
