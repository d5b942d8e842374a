"""
Node weights and candidate sets

A candidate's weight grows with its centrality and degree and with the
residual bandwidth towards the previous stage's hosts, and shrinks with
the hop distance from them. Bandwidth is normalized by the widest link and
distance by the network diameter.
"""

import logging
import math
from typing import Dict, Iterable, Mapping, Optional

from ..network.algorithms import WidestPath, widest_shortest_paths
from ..network.topology import PhysicalNetwork
from ..network.types import LinkId, NodeId
from .types import CandidateSet

logger = logging.getLogger(__name__)


def weight_formula(centrality: float, degree: float, bandwidth_factor: float,
                   distance_factor: float) -> float:
    """(BC + d) x bandwidth / distance"""
    return (centrality + degree) * bandwidth_factor / distance_factor


def _weight(net: PhysicalNetwork, candidate: NodeId,
            widest: Mapping[NodeId, Dict[NodeId, WidestPath]]) -> float:
    max_bandwidth = net.max_link_bandwidth()
    bandwidth_factor = 1.0
    hops = 0
    for host, reach in widest.items():
        if host == candidate:
            continue
        entry = reach.get(candidate)
        if entry is None:
            return 0.0
        bandwidth_factor = min(bandwidth_factor, max(0.0, entry.bottleneck) / max_bandwidth)
        hops = max(hops, entry.hops)
    diameter = max(1, net.diameter())
    return weight_formula(net.centrality()[candidate], net.degree(candidate),
                          bandwidth_factor, max(1, hops) / diameter)


def node_weight(net: PhysicalNetwork, k: NodeId, prev_hosts: Iterable[NodeId],
                residual: Optional[Mapping[LinkId, float]] = None) -> float:
    """
    Priority of ECN ``k`` as the next host after ``prev_hosts``

    Args:
        net: Network (centrality and degree are topological)
        k: Candidate ECN
        prev_hosts: Hosts of the previous stage (the ingress for stage 1)
        residual: Residual bandwidth per link; the network's own when omitted

    Returns:
        (BC_k + d_k) x b / dist, where b is the smallest bottleneck of the
        widest minimum-hop paths from the previous hosts over the largest
        link bandwidth, and dist the largest hop count (at least 1) over
        the network diameter, which keeps dist in (0, 1]
    """
    if residual is None:
        residual = {l: link.residual for l, link in net.links.items()}
    widest = {h: widest_shortest_paths(net, h, residual) for h in sorted(set(prev_hosts))}
    return _weight(net, k, widest)


def build_candidate_set(net: PhysicalNetwork, stage: int, prev_hosts: Iterable[NodeId],
                        residual_cpu: Mapping[NodeId, float], residual_bw: Mapping[LinkId, float],
                        size: int, min_cpu: float = 0.0) -> CandidateSet:
    """
    Top-``size`` ECNs by weight, heaviest first, ties by node id

    Eligible ECNs have positive residual CPU of at least ``min_cpu``.
    """
    widest = {h: widest_shortest_paths(net, h, residual_bw) for h in sorted(set(prev_hosts))}
    scored = []
    for node_id in net.ecn_ids:
        cpu = residual_cpu[node_id]
        if cpu <= 0 or cpu < min_cpu:
            continue
        weight = _weight(net, node_id, widest)
        if math.isfinite(weight):
            scored.append((node_id, weight))
    scored.sort(key=lambda item: (-item[1], item[0]))
    candidates = CandidateSet(stage=stage, entries=scored[:size])
    logger.debug(f"Stage {stage} candidates: {candidates.entries}")
    return candidates
