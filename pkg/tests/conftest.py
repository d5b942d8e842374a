"""
Shared fixtures: small hand-built networks and requests
"""

import os
import sys

import pytest

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from chainsim.chain.types import DEFAULT_VNF_CATALOG, ServiceChainRequest
from chainsim.network.topology import PhysicalNetwork, build_tree_star
from chainsim.network.types import LinkKind, NodeKind, TopologyConfig


def make_request(ingress, egress, length=1, cpu=10.0, bandwidth=15.0, data=None,
                 delay_bound=1000.0, request_id=0):
    """Request whose data size matches its bandwidth over a one-second window"""
    return ServiceChainRequest(
        id=request_id,
        ingress=ingress,
        egress=egress,
        vnf_sequence=DEFAULT_VNF_CATALOG[:length],
        cpu_demand=cpu,
        data_size=bandwidth / 8.0 if data is None else data,
        bandwidth_demand=bandwidth,
        delay_bound=delay_bound,
    )


@pytest.fixture
def diamond_net():
    """
    Switch 0 (ingress) -> ECNs 1 and 2 -> switch 3 (egress), every link 10 bps

    One path of the diamond cannot carry 15 bps; the two together can.
    """
    net = PhysicalNetwork()
    net.add_node(NodeKind.SWITCHING, 1000, is_hub=True)
    net.add_node(NodeKind.EDGE_COMPUTE, 100.0)
    net.add_node(NodeKind.EDGE_COMPUTE, 100.0)
    net.add_node(NodeKind.SWITCHING, 1000, is_hub=True)
    for a, b in ((0, 1), (0, 2), (1, 3), (2, 3)):
        net.add_link(a, b, LinkKind.OPTICAL, 10.0, 0.0)
    return net


@pytest.fixture
def relay_net():
    """
    Switch 0 (ingress) reaches ECN 3 over relays 1 or 2; ECN 3 - switch 4 (egress)

    Links 0-1 (id 0), 0-2 (id 1), 1-3 (id 2), 2-3 (id 3), 3-4 (id 4), all 10 bps.
    """
    net = PhysicalNetwork()
    net.add_node(NodeKind.SWITCHING, 1000, is_hub=True)
    net.add_node(NodeKind.SWITCHING, 1000)
    net.add_node(NodeKind.SWITCHING, 1000)
    net.add_node(NodeKind.EDGE_COMPUTE, 100.0)
    net.add_node(NodeKind.SWITCHING, 1000, is_hub=True)
    for a, b in ((0, 1), (0, 2), (1, 3), (2, 3), (3, 4)):
        net.add_link(a, b, LinkKind.OPTICAL, 10.0, 0.0)
    return net


@pytest.fixture
def single_ecn_net():
    """One hub (node 0) with one ECN (node 1)"""
    return build_tree_star(TopologyConfig(ecn_count=1, tree_depth=0, star_leaves_per_hub=1))


@pytest.fixture
def small_tree_net():
    """Root switch 0, hubs 1 and 2, ECNs 3-5 in a fiber ring"""
    return build_tree_star(TopologyConfig(ecn_count=3, tree_depth=1, tree_fanout=2,
                                          star_leaves_per_hub=2))


@pytest.fixture
def default_net():
    return build_tree_star(TopologyConfig())
