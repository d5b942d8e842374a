"""
Shared types and dataclasses for the network module
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Tuple

from .. import settings

NodeId = int
LinkId = int


class NodeKind(Enum):
    """Kinds of physical nodes"""
    EDGE_COMPUTE = "ecn"
    SWITCHING = "switch"


class LinkKind(Enum):
    """Kinds of physical links"""
    OPTICAL = "optical"
    WIRELESS = "wireless"


@dataclass
class NetworkNode:
    """An edge computing node or a switching node with its capacity and load"""
    id: NodeId
    kind: NodeKind
    compute_capacity: float = 0.0  # cycles/sec, ECN only
    compute_load: float = 0.0
    switch_capacity: float = 0.0  # flow-table entries, switch only
    switch_load: float = 0.0
    is_hub: bool = False

    def __post_init__(self):
        if self.kind == NodeKind.EDGE_COMPUTE:
            if self.compute_capacity <= 0:
                raise ValueError(f"ECN {self.id} needs a positive compute capacity")
            if self.switch_capacity or self.switch_load:
                raise ValueError(f"ECN {self.id} cannot carry switch capacity")
        else:
            if self.switch_capacity <= 0:
                raise ValueError(f"Switch {self.id} needs a positive flow-table capacity")
            if self.compute_capacity or self.compute_load:
                raise ValueError(f"Switch {self.id} cannot carry compute capacity")

    @property
    def is_ecn(self) -> bool:
        return self.kind == NodeKind.EDGE_COMPUTE

    @property
    def capacity(self) -> float:
        return self.compute_capacity if self.is_ecn else self.switch_capacity

    @property
    def load(self) -> float:
        return self.compute_load if self.is_ecn else self.switch_load

    @property
    def utilization(self) -> float:
        return self.load / self.capacity


@dataclass
class NetworkLink:
    """An undirected optical or wireless link"""
    id: LinkId
    endpoints: Tuple[NodeId, NodeId]
    kind: LinkKind
    bandwidth: float  # bits/sec
    load: float = 0.0
    prop_delay: float = 0.0  # seconds

    def __post_init__(self):
        a, b = self.endpoints
        if a == b:
            raise ValueError(f"Link {self.id} is a self-loop on node {a}")
        if self.bandwidth <= 0:
            raise ValueError(f"Link {self.id} needs a positive bandwidth")
        if self.prop_delay < 0:
            raise ValueError(f"Link {self.id} has a negative propagation delay")

    def other(self, node: NodeId) -> NodeId:
        a, b = self.endpoints
        return b if node == a else a

    @property
    def utilization(self) -> float:
        return self.load / self.bandwidth

    @property
    def residual(self) -> float:
        return self.bandwidth - self.load


@dataclass(frozen=True)
class Path:
    """A simple path given both as nodes and as the links joining them"""
    node_sequence: Tuple[NodeId, ...]
    link_sequence: Tuple[LinkId, ...] = ()
    cost: float = 0.0

    def __post_init__(self):
        if not self.node_sequence:
            raise ValueError("A path needs at least one node")
        if len(self.link_sequence) != len(self.node_sequence) - 1:
            raise ValueError("A path needs exactly one link per hop")
        if len(set(self.node_sequence)) != len(self.node_sequence):
            raise ValueError(f"Path {self.node_sequence} repeats a node")
        if self.cost < 0:
            raise ValueError("Path cost must be nonnegative")

    @property
    def source(self) -> NodeId:
        return self.node_sequence[0]

    @property
    def target(self) -> NodeId:
        return self.node_sequence[-1]

    @property
    def hops(self) -> int:
        return len(self.link_sequence)

    @classmethod
    def trivial(cls, node: NodeId) -> "Path":
        """Zero-length path for instances sharing a host"""
        return cls(node_sequence=(node,))


@dataclass
class TopologyConfig:
    """Parameters of the tree-to-star generator"""
    ecn_count: int = settings.ECN_COUNT
    tree_depth: int = settings.TREE_DEPTH
    tree_fanout: int = settings.TREE_FANOUT
    star_leaves_per_hub: int = settings.STAR_LEAVES_PER_HUB
    optical_bandwidth: float = settings.OPTICAL_BANDWIDTH
    wireless_bandwidth: float = settings.WIRELESS_BANDWIDTH
    wireless_channels: int = settings.WIRELESS_CHANNELS
    compute_capacity_mean: float = settings.COMPUTE_CAPACITY_MEAN
    compute_capacity_spread: float = settings.COMPUTE_CAPACITY_SPREAD
    switch_capacity: float = settings.SWITCH_CAPACITY
    optical_prop_delay: float = settings.OPTICAL_PROP_DELAY
    wireless_prop_delay: float = settings.WIRELESS_PROP_DELAY
    ecn_interconnect: bool = settings.ECN_INTERCONNECT
    rng_seed: int = settings.TOPOLOGY_SEED

    def __post_init__(self):
        if self.ecn_count < 1:
            raise ValueError("ecn_count must be at least 1")
        if self.tree_depth < 0:
            raise ValueError("tree_depth must be nonnegative")
        if self.tree_fanout < 1 or self.star_leaves_per_hub < 1:
            raise ValueError("tree_fanout and star_leaves_per_hub must be at least 1")
        if self.wireless_channels < 1:
            raise ValueError("wireless_channels must be at least 1")
        for name in ("optical_bandwidth", "wireless_bandwidth", "compute_capacity_mean",
                     "switch_capacity"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.compute_capacity_spread < 0:
            raise ValueError("compute_capacity_spread must be nonnegative")
        if self.compute_capacity_mean - self.compute_capacity_spread <= 0:
            raise ValueError("compute capacities must stay positive: mean - spread <= 0")
        if self.optical_prop_delay < 0 or self.wireless_prop_delay < 0:
            raise ValueError("propagation delays must be nonnegative")
        if self.ecn_count > self.hub_count * self.star_leaves_per_hub:
            raise ValueError(
                f"ecn_count={self.ecn_count} exceeds the {self.hub_count} hubs x "
                f"{self.star_leaves_per_hub} star leaves of this tree"
            )

    @property
    def hub_count(self) -> int:
        return self.tree_fanout ** self.tree_depth

    @property
    def switch_count(self) -> int:
        return sum(self.tree_fanout ** level for level in range(self.tree_depth + 1))
