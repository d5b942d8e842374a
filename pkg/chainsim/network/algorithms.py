#!/usr/bin/env python3
"""
Graph Algorithms for Placement Heuristics
Betweenness centrality, hop distances, Yen k-shortest paths and
bottleneck-maximizing shortest paths over a PhysicalNetwork.
"""

import logging
import math
from dataclasses import dataclass
from typing import Collection, Dict, List, Mapping, Optional, Tuple

import networkx as nx

from .topology import PhysicalNetwork
from .types import LinkId, LinkKind, NodeId, Path

logger = logging.getLogger(__name__)

_COST_DIGITS = 9


class NodeUnreachableError(LookupError):
    """Raised when two nodes are not connected"""


@dataclass
class WidestPath:
    """Minimum-hop path that keeps the most residual bandwidth"""
    hops: int
    bottleneck: float
    path: Path


def betweenness_centrality(net: PhysicalNetwork) -> Dict[NodeId, float]:
    """
    Unnormalized hop-count betweenness of every node

    Each unordered pair (s, t) contributes sigma_st(v) / sigma_st to every
    intermediate node v.
    """
    values = nx.betweenness_centrality(net.graph, normalized=False)
    return {node_id: float(values[node_id]) for node_id in sorted(values)}


def hop_distance(net: PhysicalNetwork, a: NodeId, b: NodeId) -> int:
    """Length of the shortest unweighted path between two nodes"""
    net.node(a)
    net.node(b)
    try:
        return nx.shortest_path_length(net.graph, a, b)
    except nx.NetworkXNoPath:
        raise NodeUnreachableError(f"Node {b} is unreachable from node {a}") from None


def ranked_simple_paths(graph: nx.Graph, src, dst, k: int,
                        weight: str = "cost") -> List[Tuple[float, List]]:
    """
    Up to ``k`` loopless paths by nondecreasing cost, ties by node sequence

    Yen's enumeration yields paths in cost order; every path tied with the
    k-th cost is collected before sorting, so the result for k is always a
    prefix of the result for k + 1.
    """
    found: List[Tuple[float, List]] = []
    try:
        for nodes in nx.shortest_simple_paths(graph, src, dst, weight=weight):
            cost = math.fsum(graph[u][v][weight] for u, v in zip(nodes, nodes[1:]))
            if len(found) >= k and round(cost, _COST_DIGITS) > round(found[k - 1][0], _COST_DIGITS):
                break
            found.append((cost, list(nodes)))
    except nx.NetworkXNoPath:
        return []
    found.sort(key=lambda item: (round(item[0], _COST_DIGITS), item[1]))
    return found[:k]


def _links_along(net: PhysicalNetwork, nodes: List[NodeId]) -> Tuple[LinkId, ...]:
    return tuple(net.graph[u][v]["link_id"] for u, v in zip(nodes, nodes[1:]))


def path_from_nodes(net: PhysicalNetwork, nodes: List[NodeId], cost: float = 0.0) -> Path:
    """Path along consecutive nodes, looking up the joining links"""
    return Path(node_sequence=tuple(nodes), link_sequence=_links_along(net, nodes), cost=cost)


def k_shortest_paths(net: PhysicalNetwork, src: NodeId, dst: NodeId, k: int,
                     link_cost: Optional[Mapping[LinkId, float]] = None,
                     allowed_kinds: Optional[Collection[LinkKind]] = None) -> List[Path]:
    """
    Yen k-shortest loopless paths

    Args:
        net: Network to search
        src: Source node
        dst: Destination node (must differ from src)
        k: Maximum number of paths (>= 1)
        link_cost: Nonnegative cost per link id; hop count when omitted
        allowed_kinds: Link kinds the paths may use; all kinds when omitted

    Returns:
        Up to k paths in nondecreasing cost; empty when dst is unreachable
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if src == dst:
        raise ValueError("k_shortest_paths needs distinct endpoints")
    net.node(src)
    net.node(dst)

    graph = nx.Graph()
    graph.add_nodes_from(sorted(net.nodes))
    for link_id in sorted(net.links):
        link = net.links[link_id]
        if allowed_kinds is not None and link.kind not in allowed_kinds:
            continue
        cost = 1.0 if link_cost is None else float(link_cost[link_id])
        if cost < 0:
            raise ValueError(f"Link {link_id} has negative cost {cost}")
        graph.add_edge(*link.endpoints, link_id=link_id, cost=cost)

    return [
        Path(node_sequence=tuple(nodes), link_sequence=_links_along(net, nodes), cost=cost)
        for cost, nodes in ranked_simple_paths(graph, src, dst, k)
    ]


def candidate_routes(net: PhysicalNetwork, src: NodeId, dst: NodeId, k: int) -> List[Path]:
    """Cached hop-count k-shortest optical paths (the topology never changes)"""
    if src == dst:
        return [Path.trivial(src)]
    key = (src, dst, k)
    if key not in net._hop_paths:
        net._hop_paths[key] = k_shortest_paths(net, src, dst, k,
                                               allowed_kinds=(LinkKind.OPTICAL,))
    return net._hop_paths[key]


def equal_cost_paths(net: PhysicalNetwork, src: NodeId, dst: NodeId) -> List[Path]:
    """Cached minimum-hop optical paths, in lexicographic node order"""
    if src == dst:
        return [Path.trivial(src)]
    key = (src, dst)
    if key not in net._equal_paths:
        try:
            sequences = sorted(nx.all_shortest_paths(net.routing_graph(), src, dst))
        except nx.NetworkXNoPath:
            sequences = []
        net._equal_paths[key] = [
            Path(node_sequence=tuple(nodes), link_sequence=_links_along(net, nodes),
                 cost=float(len(nodes) - 1))
            for nodes in sequences
        ]
    return net._equal_paths[key]


def widest_shortest_paths(net: PhysicalNetwork, source: NodeId,
                          residual: Mapping[LinkId, float]) -> Dict[NodeId, WidestPath]:
    """
    For every reachable node, the minimum-hop optical path with the largest bottleneck

    Args:
        net: Network to search
        source: Start node
        residual: Remaining bandwidth per link id

    Returns:
        Mapping target -> WidestPath (the source maps to a zero-hop path with
        infinite bottleneck)
    """
    graph = net.routing_graph()
    distance = nx.single_source_shortest_path_length(graph, source)
    order = sorted(distance, key=lambda n: (distance[n], n))

    width: Dict[NodeId, float] = {source: math.inf}
    parent: Dict[NodeId, Optional[NodeId]] = {source: None}
    for node in order[1:]:
        best, best_pred = -1.0, None
        for pred in sorted(graph.neighbors(node)):
            if distance.get(pred) != distance[node] - 1:
                continue
            candidate = min(width[pred], residual[graph[pred][node]["link_id"]])
            if candidate > best:
                best, best_pred = candidate, pred
        width[node] = best
        parent[node] = best_pred

    result: Dict[NodeId, WidestPath] = {}
    for node in order:
        nodes = [node]
        while parent[nodes[-1]] is not None:
            nodes.append(parent[nodes[-1]])
        nodes.reverse()
        path = Path(node_sequence=tuple(nodes), link_sequence=_links_along(net, nodes),
                    cost=float(distance[node]))
        result[node] = WidestPath(hops=distance[node], bottleneck=width[node], path=path)
    return result
