"""
Physical network model, tree-star generator and graph algorithms
"""

from .types import (
    LinkId,
    LinkKind,
    NetworkLink,
    NetworkNode,
    NodeId,
    NodeKind,
    Path,
    TopologyConfig,
)
from .topology import PhysicalNetwork, build_tree_star, dump_network, load_network
from .algorithms import (
    NodeUnreachableError,
    WidestPath,
    betweenness_centrality,
    candidate_routes,
    equal_cost_paths,
    hop_distance,
    k_shortest_paths,
    path_from_nodes,
    ranked_simple_paths,
    widest_shortest_paths,
)

__all__ = [
    "LinkId",
    "LinkKind",
    "NetworkLink",
    "NetworkNode",
    "NodeId",
    "NodeKind",
    "Path",
    "TopologyConfig",
    "PhysicalNetwork",
    "build_tree_star",
    "dump_network",
    "load_network",
    "NodeUnreachableError",
    "WidestPath",
    "betweenness_centrality",
    "candidate_routes",
    "equal_cost_paths",
    "hop_distance",
    "k_shortest_paths",
    "path_from_nodes",
    "ranked_simple_paths",
    "widest_shortest_paths",
]
