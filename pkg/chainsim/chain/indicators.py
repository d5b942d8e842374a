"""
Load balance indicators and the weighted composite objective
"""

import logging
import math
from typing import Optional, Sequence

import numpy as np

from ..network.topology import PhysicalNetwork
from .types import LoadBalanceIndicators, ObjectiveWeights

logger = logging.getLogger(__name__)


def _peak_ratio(values: np.ndarray) -> float:
    """max/mean, with 1.0 for an empty or all-zero population"""
    if values.size == 0:
        return 1.0
    mean = float(values.mean())
    if mean <= 0:
        return 1.0
    return float(values.max()) / mean


def composite_objective(lbi: LoadBalanceIndicators, w: ObjectiveWeights) -> float:
    """alpha * lbi_c + beta * lbi_n + gamma * lbi_s"""
    return w.alpha * lbi.lbi_c + w.beta * lbi.lbi_n + w.gamma * lbi.lbi_s


def lbi_from_utilizations(ecn_util: Sequence[float], link_util: Sequence[float],
                          switch_util: Sequence[float],
                          weights: Optional[ObjectiveWeights] = None) -> LoadBalanceIndicators:
    """
    Build the indicator triple from raw utilization vectors

    Planners use this to score a hypothetical state without touching the
    network.

    Args:
        ecn_util: W/C of every ECN
        link_util: W/B of every link
        switch_util: W/C of every switching node
        weights: Composite weights; library defaults when omitted

    Returns:
        LoadBalanceIndicators with the composite filled in
    """
    weights = weights or ObjectiveWeights()
    ecn = np.asarray(ecn_util, dtype=float)
    links = np.asarray(link_util, dtype=float)
    switches = np.asarray(switch_util, dtype=float)

    lbi = LoadBalanceIndicators(
        lbi_c=_peak_ratio(ecn),
        lbi_n=float(np.std(links)) if links.size else 0.0,
        lbi_s=_peak_ratio(switches),
        composite=0.0,
        link_peak_ratio=_peak_ratio(links),
    )
    lbi.composite = composite_objective(lbi, weights)
    return lbi


def compute_lbi(net: PhysicalNetwork,
                weights: Optional[ObjectiveWeights] = None) -> LoadBalanceIndicators:
    """Indicators of the network's current loads"""
    ecn_util = [net.nodes[n].utilization for n in net.ecn_ids]
    switch_util = [net.nodes[n].utilization for n in net.switch_ids]
    link_util = [net.links[l].utilization for l in sorted(net.links)]
    return lbi_from_utilizations(ecn_util, link_util, switch_util, weights)


def network_utilization(net: PhysicalNetwork) -> float:
    """Total link load over total link bandwidth"""
    total = math.fsum(link.bandwidth for link in net.links.values())
    if total <= 0:
        return 0.0
    return math.fsum(link.load for link in net.links.values()) / total
