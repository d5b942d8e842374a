"""
IoT request scenarios and the seeded request generator
"""

import dataclasses
import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Tuple

import numpy as np

from .. import settings
from ..chain.types import DEFAULT_VNF_CATALOG, ServiceChainRequest, VnfKind
from ..network.topology import PhysicalNetwork

logger = logging.getLogger(__name__)


class ScenarioKind(Enum):
    DATA_INTENSIVE = "data_intensive"
    USER_INTENSIVE = "user_intensive"


_DEFAULTS = {
    ScenarioKind.DATA_INTENSIVE: settings.DATA_INTENSIVE,
    ScenarioKind.USER_INTENSIVE: settings.USER_INTENSIVE,
}


@dataclass
class ScenarioConfig:
    """Request distributions of one scenario and the request counts to snapshot"""
    kind: ScenarioKind
    chain_len_range: Tuple[int, int]
    cpu_demand_range: Tuple[float, float]  # cycles per stage
    data_size_range: Tuple[float, float]  # bytes
    request_counts: Tuple[int, ...]
    delay_bound: float  # seconds
    transfer_window: float  # seconds
    catalog: Tuple[VnfKind, ...] = DEFAULT_VNF_CATALOG
    rng_seed: int = settings.DEFAULT_SEEDS[0]

    def __post_init__(self):
        self.kind = ScenarioKind(self.kind)
        self.chain_len_range = tuple(int(v) for v in self.chain_len_range)
        self.cpu_demand_range = tuple(float(v) for v in self.cpu_demand_range)
        self.data_size_range = tuple(float(v) for v in self.data_size_range)
        self.request_counts = tuple(sorted(int(v) for v in self.request_counts))
        self.catalog = tuple(self.catalog)
        for name in ("chain_len_range", "cpu_demand_range", "data_size_range"):
            low, high = getattr(self, name)
            if low <= 0 or high < low:
                raise ValueError(f"{name} must be a positive range, got ({low}, {high})")
        if not self.request_counts or self.request_counts[0] < 0:
            raise ValueError("request_counts must be a nonempty list of nonnegative integers")
        if self.delay_bound <= 0 or self.transfer_window <= 0:
            raise ValueError("delay_bound and transfer_window must be positive")
        if not self.catalog:
            raise ValueError("VNF catalog must not be empty")

    @classmethod
    def for_kind(cls, kind: ScenarioKind, **overrides) -> "ScenarioConfig":
        values = dict(_DEFAULTS[ScenarioKind(kind)])
        values.update(overrides)
        return cls(kind=kind, **values)

    @classmethod
    def data_intensive(cls, **overrides) -> "ScenarioConfig":
        """Few large flows: 500 Mcycles-1 Gcycle per stage, 600-1000 MB per chain"""
        return cls.for_kind(ScenarioKind.DATA_INTENSIVE, **overrides)

    @classmethod
    def user_intensive(cls, **overrides) -> "ScenarioConfig":
        """Many small flows: 10-100 Mcycles per stage, 300-800 KB per chain"""
        return cls.for_kind(ScenarioKind.USER_INTENSIVE, **overrides)

    def with_seed(self, seed: int) -> "ScenarioConfig":
        return dataclasses.replace(self, rng_seed=seed)

    @property
    def max_requests(self) -> int:
        return self.request_counts[-1]


def generate_requests(scenario: ScenarioConfig, n: int,
                      net: PhysicalNetwork) -> List[ServiceChainRequest]:
    """
    Draw ``n`` chain requests

    The stream depends only on the scenario (its seed included) and the
    network's access nodes; the first k requests of a stream of n are the
    stream of k.

    Args:
        scenario: Distributions and seed
        n: Number of requests (>= 0)
        net: Network whose access nodes (FiWi hubs) act as ingress/egress

    Returns:
        Requests with ids 0..n-1
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    access = sorted(net.access_node_ids)
    if len(access) < 2:
        access = sorted(net.nodes)
    if len(access) < 2:
        raise ValueError("Need at least two nodes to draw distinct ingress and egress")

    rng = np.random.default_rng(scenario.rng_seed)
    low_len, high_len = scenario.chain_len_range
    requests = []
    for request_id in range(n):
        length = int(rng.integers(low_len, high_len + 1))
        kinds = rng.integers(0, len(scenario.catalog), size=length)
        cpu = float(rng.uniform(*scenario.cpu_demand_range))
        data = float(rng.uniform(*scenario.data_size_range))
        ingress, egress = rng.choice(len(access), size=2, replace=False)
        requests.append(ServiceChainRequest(
            id=request_id,
            ingress=access[int(ingress)],
            egress=access[int(egress)],
            vnf_sequence=tuple(scenario.catalog[int(k)] for k in kinds),
            cpu_demand=cpu,
            data_size=data,
            bandwidth_demand=data * 8.0 / scenario.transfer_window,
            delay_bound=scenario.delay_bound,
        ))
    logger.debug(f"Generated {n} {scenario.kind.value} request(s) with seed {scenario.rng_seed}")
    return requests
