#!/usr/bin/env python3
"""
Physical Network Model
Holds the ECN/switch graph, its capacities and loads, the tree-to-star
generator, and the line-oriented dump format used by golden tests.
"""

import copy
import logging
import math
from typing import Dict, Hashable, Iterable, List, Optional, Tuple

import networkx as nx
import numpy as np

from .types import (
    LinkId,
    LinkKind,
    NetworkLink,
    NetworkNode,
    NodeId,
    NodeKind,
    TopologyConfig,
)

logger = logging.getLogger(__name__)

# ledger key of the load a resource carried before any plan touched it
_BASELINE = None


class PhysicalNetwork:
    """Undirected graph of ECNs and switching nodes joined by optical/wireless links"""

    def __init__(self):
        self.graph = nx.Graph()
        self.nodes: Dict[NodeId, NetworkNode] = {}
        self.links: Dict[LinkId, NetworkLink] = {}
        self._ledger: Dict[Tuple[str, int], Dict[Hashable, float]] = {}
        self._owner_keys: Dict[Hashable, List[Tuple[str, int]]] = {}
        self._reset_caches()

    def _reset_caches(self):
        self._routing_graph: Optional[nx.Graph] = None
        self._centrality: Optional[Dict[NodeId, float]] = None
        self._diameter: Optional[int] = None
        self._hop_paths: Dict[Tuple[NodeId, NodeId, int], list] = {}
        self._equal_paths: Dict[Tuple[NodeId, NodeId], list] = {}

    # ------------------------------------------------------------------
    # construction
    # ------------------------------------------------------------------
    def add_node(self, kind: NodeKind, capacity: float, is_hub: bool = False) -> NodeId:
        """
        Add a node with the next dense id

        Args:
            kind: ECN or switching node
            capacity: compute capacity (cycles/sec) for ECNs, flow-table entries for switches
            is_hub: whether users attach to this switch (FiWi node)

        Returns:
            The new node id
        """
        node_id = len(self.nodes)
        if kind == NodeKind.EDGE_COMPUTE:
            node = NetworkNode(id=node_id, kind=kind, compute_capacity=float(capacity))
        else:
            node = NetworkNode(id=node_id, kind=kind, switch_capacity=float(capacity),
                               is_hub=is_hub)
        self.nodes[node_id] = node
        self.graph.add_node(node_id)
        self._reset_caches()
        return node_id

    def add_link(self, a: NodeId, b: NodeId, kind: LinkKind, bandwidth: float,
                 prop_delay: float = 0.0) -> LinkId:
        """Add an undirected link with the next dense id"""
        if a not in self.nodes or b not in self.nodes:
            raise ValueError(f"Link endpoints {a}-{b} must exist in the network")
        if self.graph.has_edge(a, b):
            raise ValueError(f"Parallel link between {a} and {b} is not allowed")
        link_id = len(self.links)
        link = NetworkLink(id=link_id, endpoints=(a, b), kind=kind,
                           bandwidth=float(bandwidth), prop_delay=float(prop_delay))
        self.links[link_id] = link
        self.graph.add_edge(a, b, link_id=link_id)
        self._reset_caches()
        return link_id

    def copy(self) -> "PhysicalNetwork":
        return copy.deepcopy(self)

    # ------------------------------------------------------------------
    # lookups
    # ------------------------------------------------------------------
    def node(self, node_id: NodeId) -> NetworkNode:
        try:
            return self.nodes[node_id]
        except KeyError:
            raise KeyError(f"Unknown node {node_id}") from None

    def link(self, link_id: LinkId) -> NetworkLink:
        try:
            return self.links[link_id]
        except KeyError:
            raise KeyError(f"Unknown link {link_id}") from None

    def link_between(self, a: NodeId, b: NodeId) -> NetworkLink:
        data = self.graph.get_edge_data(a, b)
        if data is None:
            raise KeyError(f"No link between {a} and {b}")
        return self.links[data["link_id"]]

    @property
    def ecn_ids(self) -> List[NodeId]:
        return [n.id for n in self.nodes.values() if n.is_ecn]

    @property
    def switch_ids(self) -> List[NodeId]:
        return [n.id for n in self.nodes.values() if not n.is_ecn]

    @property
    def access_node_ids(self) -> List[NodeId]:
        """Switches where user traffic enters and leaves (the FiWi hubs)"""
        return [n.id for n in self.nodes.values() if n.is_hub]

    def degree(self, node_id: NodeId) -> int:
        return self.graph.degree[node_id]

    def is_connected(self) -> bool:
        return len(self.nodes) > 0 and nx.is_connected(self.graph)

    def diameter(self) -> int:
        if self._diameter is None:
            self._diameter = nx.diameter(self.graph) if len(self.nodes) > 1 else 0
        return self._diameter

    def routing_graph(self) -> nx.Graph:
        """Subgraph of optical links, the only ones chain traffic may traverse"""
        if self._routing_graph is None:
            graph = nx.Graph()
            graph.add_nodes_from(sorted(self.nodes))
            for link in self.links.values():
                if link.kind == LinkKind.OPTICAL:
                    graph.add_edge(*link.endpoints, link_id=link.id)
            self._routing_graph = graph
        return self._routing_graph

    def centrality(self) -> Dict[NodeId, float]:
        """Cached betweenness centrality (the topology is static)"""
        if self._centrality is None:
            from .algorithms import betweenness_centrality
            self._centrality = betweenness_centrality(self)
        return self._centrality

    def max_link_bandwidth(self) -> float:
        return max(link.bandwidth for link in self.links.values())

    # ------------------------------------------------------------------
    # load accounting
    # ------------------------------------------------------------------
    def load_snapshot(self) -> Tuple[float, ...]:
        """Every load field in a fixed order, for bit-identity comparisons"""
        values: List[float] = []
        for node_id in sorted(self.nodes):
            node = self.nodes[node_id]
            values.extend((node.compute_load, node.switch_load))
        for link_id in sorted(self.links):
            values.append(self.links[link_id].load)
        return tuple(values)

    def has_owner(self, owner: Hashable) -> bool:
        return owner in self._owner_keys

    def commit_allocation(self, owner: Hashable, cpu: Dict[NodeId, float],
                          bandwidth: Dict[LinkId, float], entries: Dict[NodeId, float]):
        """
        Record one owner's resource contributions and refresh the touched loads

        Loads are recomputed as an exact sum of the ledger, so revoking an
        owner restores every load bit for bit.
        """
        if owner in self._owner_keys:
            raise ValueError(f"Allocation for {owner!r} is already committed")
        keys: List[Tuple[str, int]] = []
        for kind, amounts in (("cpu", cpu), ("bw", bandwidth), ("pt", entries)):
            for resource_id, amount in sorted(amounts.items()):
                if amount == 0:
                    continue
                key = (kind, resource_id)
                entry = self._ledger.setdefault(key, {_BASELINE: self._read_load(key)})
                entry[owner] = float(amount)
                self._write_load(key, math.fsum(entry.values()))
                keys.append(key)
        self._owner_keys[owner] = keys

    def revoke_allocation(self, owner: Hashable):
        """Remove one owner's contributions, restoring the previous loads exactly"""
        keys = self._owner_keys.pop(owner)
        for key in keys:
            entry = self._ledger[key]
            del entry[owner]
            self._write_load(key, math.fsum(entry.values()))

    def _read_load(self, key: Tuple[str, int]) -> float:
        kind, resource_id = key
        if kind == "cpu":
            return self.nodes[resource_id].compute_load
        if kind == "pt":
            return self.nodes[resource_id].switch_load
        return self.links[resource_id].load

    def _write_load(self, key: Tuple[str, int], value: float):
        kind, resource_id = key
        if kind == "cpu":
            self.nodes[resource_id].compute_load = value
        elif kind == "pt":
            self.nodes[resource_id].switch_load = value
        else:
            self.links[resource_id].load = value


def build_tree_star(config: TopologyConfig) -> PhysicalNetwork:
    """
    Generate the tree-to-star FiWi back-end

    Layout: switches are numbered breadth-first from the root (id 0), a
    switch at level l < depth has ``tree_fanout`` children. The last level
    are hubs (FiWi nodes). ECNs get the ids after the switches; ECN i hangs
    off hub i mod hubs. Link ids: tree links in breadth-first order, then one
    hub-ECN link per ECN, then the ECN fiber ring (ECN i to ECN i+1 mod n)
    when ``ecn_interconnect`` is set.

    Args:
        config: Generator parameters (validated on construction)

    Returns:
        A connected network with all loads at zero
    """
    rng = np.random.default_rng(config.rng_seed)
    net = PhysicalNetwork()

    levels: List[List[NodeId]] = []
    for level in range(config.tree_depth + 1):
        is_hub = level == config.tree_depth
        count = config.tree_fanout ** level
        levels.append([
            net.add_node(NodeKind.SWITCHING, config.switch_capacity, is_hub=is_hub)
            for _ in range(count)
        ])

    capacities = rng.uniform(
        config.compute_capacity_mean - config.compute_capacity_spread,
        config.compute_capacity_mean + config.compute_capacity_spread,
        size=config.ecn_count,
    )
    ecns = [net.add_node(NodeKind.EDGE_COMPUTE, float(c)) for c in capacities]

    for level in range(config.tree_depth):
        for index, parent in enumerate(levels[level]):
            for child_slot in range(config.tree_fanout):
                child = levels[level + 1][index * config.tree_fanout + child_slot]
                net.add_link(parent, child, LinkKind.OPTICAL, config.optical_bandwidth,
                             config.optical_prop_delay)

    hubs = levels[-1]
    for index, ecn in enumerate(ecns):
        net.add_link(hubs[index % len(hubs)], ecn, LinkKind.OPTICAL,
                     config.optical_bandwidth, config.optical_prop_delay)

    if config.ecn_interconnect and len(ecns) >= 2:
        ring = list(zip(ecns, ecns[1:] + ecns[:1])) if len(ecns) > 2 else [(ecns[0], ecns[1])]
        for a, b in ring:
            net.add_link(a, b, LinkKind.OPTICAL, config.optical_bandwidth,
                         config.optical_prop_delay)

    logger.info(
        f"Built tree-star network: {len(net.switch_ids)} switches, {len(ecns)} ECNs, "
        f"{len(net.links)} links"
    )
    return net


def dump_network(net: PhysicalNetwork) -> str:
    """Serialize a network as ``node``/``link`` records, one per line"""
    lines = []
    for node_id in sorted(net.nodes):
        node = net.nodes[node_id]
        lines.append(f"node {node.id} {node.kind.value} {node.capacity!r}")
    for link_id in sorted(net.links):
        link = net.links[link_id]
        a, b = link.endpoints
        lines.append(
            f"link {link.id} {a} {b} {link.kind.value} {link.bandwidth!r} {link.prop_delay!r}"
        )
    return "\n".join(lines) + "\n"


def load_network(text: str, hubs: Optional[Iterable[NodeId]] = None) -> PhysicalNetwork:
    """
    Parse the ``dump_network`` format back into a network with zero loads

    Args:
        text: Dump text; blank lines and ``#`` comments are ignored
        hubs: Switch ids to mark as access hubs (the format does not carry it)
    """
    hub_set = set(hubs or ())
    net = PhysicalNetwork()
    for number, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        try:
            if tokens[0] == "node" and len(tokens) == 4:
                expected = int(tokens[1])
                node_id = net.add_node(NodeKind(tokens[2]), float(tokens[3]),
                                       is_hub=expected in hub_set)
            elif tokens[0] == "link" and len(tokens) == 7:
                expected = int(tokens[1])
                node_id = net.add_link(int(tokens[2]), int(tokens[3]), LinkKind(tokens[4]),
                                       float(tokens[5]), float(tokens[6]))
            else:
                raise ValueError(f"unrecognised record {tokens[0]!r}")
        except (ValueError, IndexError) as e:
            raise ValueError(f"Malformed network dump at line {number}: {e}") from e
        if node_id != expected:
            raise ValueError(f"Malformed network dump at line {number}: ids must be dense")
    return net
