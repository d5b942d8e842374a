#!/usr/bin/env python3
"""
Test the physical network model and the tree-to-star generator
"""

import os
import sys

import pytest

# Add parent directory to path for imports
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from chainsim.network.topology import PhysicalNetwork, build_tree_star, dump_network, load_network
from chainsim.network.types import LinkKind, NetworkNode, NodeKind, Path, TopologyConfig


def expected_layout(config: TopologyConfig):
    """Walk the documented layout: BFS switch tree, ECN i on hub i mod hubs, then the ring"""
    switches = [config.tree_fanout ** level for level in range(config.tree_depth + 1)]
    n_switches = sum(switches)
    hubs = list(range(n_switches - switches[-1], n_switches))
    ecns = list(range(n_switches, n_switches + config.ecn_count))

    links = []
    first = 0
    for level in range(config.tree_depth):
        children = first + switches[level]
        for index in range(switches[level]):
            for slot in range(config.tree_fanout):
                links.append((first + index, children + index * config.tree_fanout + slot))
        first = children
    for index, ecn in enumerate(ecns):
        links.append((hubs[index % len(hubs)], ecn))
    if config.ecn_interconnect and len(ecns) > 2:
        links.extend(zip(ecns, ecns[1:] + ecns[:1]))
    elif config.ecn_interconnect and len(ecns) == 2:
        links.append((ecns[0], ecns[1]))
    return n_switches, hubs, links


class TestTreeStarGenerator:
    """Test build_tree_star"""

    def test_default_parameters(self, default_net):
        """Default network: 15 ECNs on 9 hubs, 10 Gbps fiber, ~30 Gcycles ECNs"""
        assert len(default_net.ecn_ids) == 15
        assert all(link.bandwidth == 10e9 for link in default_net.links.values())
        assert all(link.kind == LinkKind.OPTICAL for link in default_net.links.values())
        assert len(default_net.access_node_ids) == 9
        assert not any(hasattr(default_net.nodes[hub], "wireless_capacity")
                       for hub in default_net.access_node_ids)
        for ecn in default_net.ecn_ids:
            assert 20e9 <= default_net.nodes[ecn].compute_capacity <= 40e9
        assert default_net.is_connected()
        print("✅ Default tree-star parameters")

    def test_minimal_network(self, single_ecn_net):
        """One hub and one ECN joined by one link, nothing loaded"""
        assert len(single_ecn_net.nodes) == 2
        assert len(single_ecn_net.links) == 1
        assert single_ecn_net.access_node_ids == [0]
        assert single_ecn_net.ecn_ids == [1]
        assert all(value == 0.0 for value in single_ecn_net.load_snapshot())

    @pytest.mark.parametrize("config", [
        TopologyConfig(ecn_count=8, tree_depth=2, tree_fanout=2, star_leaves_per_hub=2),
        TopologyConfig(ecn_count=5, tree_depth=1, tree_fanout=3, star_leaves_per_hub=2),
        TopologyConfig(ecn_count=2, tree_depth=1, tree_fanout=2, star_leaves_per_hub=1),
        TopologyConfig(ecn_count=4, tree_depth=2, tree_fanout=2, star_leaves_per_hub=1,
                       ecn_interconnect=False),
    ])
    def test_layout_matches_enumeration(self, config):
        """Node and link sets equal a direct walk of the layout rule"""
        net = build_tree_star(config)
        n_switches, hubs, links = expected_layout(config)
        assert len(net.switch_ids) == n_switches
        assert net.switch_ids == list(range(n_switches))
        assert net.access_node_ids == hubs
        assert [net.links[l].endpoints for l in sorted(net.links)] == links

    def test_two_level_binary_tree_counts(self):
        """Depth 2, fanout 2: 3 + 4 switches"""
        net = build_tree_star(TopologyConfig(ecn_count=8, tree_depth=2, tree_fanout=2,
                                             star_leaves_per_hub=2))
        assert len(net.switch_ids) == 7
        assert len(net.access_node_ids) == 4
        assert len(net.links) == 6 + 8 + 8

    def test_generation_is_deterministic(self):
        """Same config and seed give a byte-identical dump"""
        config = TopologyConfig(ecn_count=6, tree_depth=1, tree_fanout=3)
        assert dump_network(build_tree_star(config)) == dump_network(build_tree_star(config))

    def test_seed_changes_capacities(self):
        a = build_tree_star(TopologyConfig(rng_seed=1))
        b = build_tree_star(TopologyConfig(rng_seed=2))
        assert dump_network(a) != dump_network(b)

    @pytest.mark.parametrize("overrides", [
        {"ecn_count": 0},
        {"tree_depth": -1},
        {"tree_fanout": 0},
        {"optical_bandwidth": 0.0},
        {"compute_capacity_spread": 40e9},
        {"ecn_count": 19},
    ])
    def test_invalid_config(self, overrides):
        with pytest.raises(ValueError):
            TopologyConfig(**overrides)


class TestPhysicalNetwork:
    """Test construction, lookups and the dump format"""

    def test_dump_round_trip(self, small_tree_net):
        text = dump_network(small_tree_net)
        restored = load_network(text, hubs=small_tree_net.access_node_ids)
        assert dump_network(restored) == text
        assert restored.access_node_ids == small_tree_net.access_node_ids

    def test_load_rejects_sparse_ids(self):
        with pytest.raises(ValueError, match="line 2"):
            load_network("node 0 switch 10.0\nnode 2 ecn 5.0\n")

    def test_load_rejects_unknown_record(self):
        with pytest.raises(ValueError, match="line 1"):
            load_network("edge 0 1\n")

    def test_parallel_links_rejected(self, diamond_net):
        with pytest.raises(ValueError):
            diamond_net.add_link(0, 1, LinkKind.OPTICAL, 5.0)

    def test_lookups(self, diamond_net):
        assert diamond_net.link_between(2, 3).id == 3
        assert diamond_net.degree(0) == 2
        assert diamond_net.diameter() == 2
        with pytest.raises(KeyError):
            diamond_net.node(42)
        with pytest.raises(KeyError):
            diamond_net.link_between(0, 3)

    def test_node_kinds_validated(self):
        with pytest.raises(ValueError):
            NetworkNode(id=0, kind=NodeKind.EDGE_COMPUTE, compute_capacity=0.0)
        with pytest.raises(ValueError):
            NetworkNode(id=0, kind=NodeKind.SWITCHING, switch_capacity=10.0, compute_capacity=1.0)

    def test_routing_graph_skips_wireless(self, diamond_net):
        diamond_net.add_link(1, 2, LinkKind.WIRELESS, 54e6)
        assert not diamond_net.routing_graph().has_edge(1, 2)
        assert diamond_net.graph.has_edge(1, 2)

    def test_commit_and_revoke_restore_loads(self, diamond_net):
        before = diamond_net.load_snapshot()
        diamond_net.commit_allocation("a", {1: 0.1}, {0: 0.7}, {0: 1.0})
        diamond_net.commit_allocation("b", {1: 0.2}, {0: 0.1}, {})
        assert diamond_net.nodes[1].compute_load == pytest.approx(0.3)
        diamond_net.revoke_allocation("b")
        diamond_net.revoke_allocation("a")
        assert diamond_net.load_snapshot() == before

    def test_duplicate_owner_rejected(self, diamond_net):
        diamond_net.commit_allocation("a", {1: 1.0}, {}, {})
        with pytest.raises(ValueError):
            diamond_net.commit_allocation("a", {2: 1.0}, {}, {})


class TestPath:
    def test_trivial_path(self):
        path = Path.trivial(4)
        assert path.hops == 0
        assert path.source == path.target == 4

    def test_path_needs_one_link_per_hop(self):
        with pytest.raises(ValueError):
            Path(node_sequence=(0, 1), link_sequence=())

    def test_path_must_be_simple(self):
        with pytest.raises(ValueError):
            Path(node_sequence=(0, 1, 0), link_sequence=(0, 0))


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
