#!/usr/bin/env python3
"""
Test deployment plans: load indicators, constraint checks, delay and accounting
"""

import math
import os
import sys

import numpy as np
import pytest

# Add parent directory to path for imports
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from conftest import make_request

from chainsim.chain.accounting import (
    InfeasiblePlanError,
    PlanNotAppliedError,
    apply_plan,
    release_plan,
)
from chainsim.chain.feasibility import (
    Constraint,
    MalformedPlanError,
    check_feasibility,
    end_to_end_delay,
)
from chainsim.chain.indicators import (
    composite_objective,
    compute_lbi,
    lbi_from_utilizations,
    network_utilization,
)
from chainsim.chain.types import (
    DeploymentPlan,
    LoadBalanceIndicators,
    ObjectiveWeights,
    Route,
    ServiceChainRequest,
    SplitRatios,
    VnfInstance,
    trivial_splits,
)
from chainsim.network.topology import PhysicalNetwork
from chainsim.network.types import LinkKind, NodeKind, Path


@pytest.fixture
def edge_pair():
    """ECN 0 (20 Gcycles/s) - switch 1 over one 10 Gbps link with 0.1 ms propagation"""
    net = PhysicalNetwork()
    net.add_node(NodeKind.EDGE_COMPUTE, 20e9)
    net.add_node(NodeKind.SWITCHING, 1000, is_hub=True)
    net.add_link(0, 1, LinkKind.OPTICAL, 10e9, 1e-4)
    return net


def edge_request(bandwidth=8e6, delay_bound=1.0):
    return ServiceChainRequest(id=7, ingress=0, egress=1, vnf_sequence=("FW",), cpu_demand=1e9,
                               data_size=1e6, bandwidth_demand=bandwidth, delay_bound=delay_bound)


def edge_plan(req, allocated_cpu=10e9):
    """Ingress is the host; one link to the egress"""
    return DeploymentPlan(
        chain_id=req.id, ingress=0, egress=1,
        instances=[VnfInstance(chain_id=req.id, stage=1, index=0, host=0,
                               allocated_cpu=allocated_cpu)],
        splits=trivial_splits(1),
        routes={
            (0, 0, 0): [Route(path=Path.trivial(0), bandwidth=req.bandwidth_demand)],
            (1, 0, 0): [Route(path=Path((0, 1), (0,)), bandwidth=req.bandwidth_demand)],
        },
    )


def diamond_plan(req, first=0.5):
    """1-VNF plan on the diamond: instances on ECNs 1 and 2 with ``first`` of the flow on ECN 1"""
    bw = req.bandwidth_demand
    ratios = np.array([[first, 1.0 - first]])
    return DeploymentPlan(
        chain_id=req.id, ingress=0, egress=3,
        instances=[
            VnfInstance(chain_id=req.id, stage=1, index=0, host=1,
                        allocated_cpu=req.cpu_demand * first, share=first),
            VnfInstance(chain_id=req.id, stage=1, index=1, host=2,
                        allocated_cpu=req.cpu_demand * (1 - first), share=1 - first),
        ],
        splits=SplitRatios([ratios, ratios.T.copy()]),
        routes={
            (0, 0, 0): [Route(Path((0, 1), (0,)), bw * first)],
            (0, 0, 1): [Route(Path((0, 2), (1,)), bw * (1 - first))],
            (1, 0, 0): [Route(Path((1, 3), (2,)), bw * first)],
            (1, 1, 0): [Route(Path((2, 3), (3,)), bw * (1 - first))],
        },
    )


class TestLoadBalanceIndicators:
    """Test lbi_c, lbi_n, lbi_s and the composite"""

    def test_empty_network_convention(self, default_net):
        lbi = compute_lbi(default_net)
        assert lbi.as_tuple() == (1.0, 0.0, 1.0)
        assert network_utilization(default_net) == 0.0

    def test_ecn_peak_ratio(self):
        lbi = lbi_from_utilizations([0.2, 0.1, 0.1], [0.0], [0.0])
        assert lbi.lbi_c == pytest.approx(1.5)

    def test_link_stddev(self):
        lbi = lbi_from_utilizations([0.0], [0.9, 0.1, 0.1, 0.1], [0.0])
        assert lbi.lbi_n == pytest.approx(0.34641, abs=1e-5)
        assert lbi.link_peak_ratio == pytest.approx(3.0)

    def test_composite(self):
        weights = ObjectiveWeights()
        assert composite_objective(LoadBalanceIndicators(1.0, 0.0, 1.0, 0.0), weights) == \
            pytest.approx(2.0 / 3.0)
        assert composite_objective(LoadBalanceIndicators(1.5, 0.34641, 1.0, 0.0), weights) == \
            pytest.approx(0.94880, abs=1e-5)
        lbi = LoadBalanceIndicators(1.37, 0.2, 4.0, 0.0)
        assert composite_objective(lbi, ObjectiveWeights(1.0, 0.0, 0.0)) == 1.37

    def test_combined_example(self):
        lbi = lbi_from_utilizations([0.2, 0.1, 0.1], [0.9, 0.1, 0.1, 0.1], [0.5, 0.5])
        assert lbi.composite == pytest.approx(0.94880, abs=1e-5)

    def test_invalid_weights(self):
        with pytest.raises(ValueError):
            ObjectiveWeights(-1.0, 1.0, 1.0)
        with pytest.raises(ValueError):
            ObjectiveWeights(0.0, 0.0, 0.0)


class TestDelay:
    """Test end_to_end_delay"""

    def test_single_hop_example(self, edge_pair):
        """1 MB over 10 Gbps + 0.1 ms + 1 Gcycle on 10 Gcycles/s"""
        req = edge_request()
        assert end_to_end_delay(edge_plan(req), req, edge_pair) == pytest.approx(0.1009)

    def test_zero_length_paths(self, edge_pair):
        """With the egress on the host too, only execution time remains"""
        req = edge_request()
        plan = edge_plan(req)
        plan.routes[(1, 0, 0)] = [Route(path=Path.trivial(0), bandwidth=req.bandwidth_demand)]
        plan.egress = 0
        assert end_to_end_delay(plan, req, edge_pair) == pytest.approx(0.1)

    def test_parallel_branches_take_the_slowest(self, diamond_net):
        """Uneven split: the branch with more data dominates"""
        req = make_request(0, 3, cpu=10.0, bandwidth=8.0, data=1.0)
        plan = diamond_plan(req, first=0.75)
        # branch via ECN 1: 0.75 B per link at 10 bps, then 7.5 cycles on 7.5 cycles/s
        via_one = 2 * (0.75 * 8 / 10.0) + 1.0
        via_two = 2 * (0.25 * 8 / 10.0) + 1.0
        assert end_to_end_delay(plan, req, diamond_net) == pytest.approx(max(via_one, via_two))

    def test_zero_allocation_is_malformed(self, edge_pair):
        req = edge_request()
        with pytest.raises(MalformedPlanError):
            end_to_end_delay(edge_plan(req, allocated_cpu=0.0), req, edge_pair)


class TestFeasibility:
    """Test check_feasibility"""

    def test_half_loaded_plan_is_feasible(self, diamond_net):
        req = make_request(0, 3, cpu=100.0, bandwidth=10.0)
        assert check_feasibility(diamond_plan(req), req, diamond_net) == []

    def test_link_overload(self, edge_pair):
        """101% on the only link: one C2 violation naming it"""
        req = edge_request(bandwidth=10.1e9)
        violations = check_feasibility(edge_plan(req), req, edge_pair)
        assert len(violations) == 1
        assert violations[0].constraint == Constraint.C2_BANDWIDTH
        assert violations[0].entity == "link 0"
        assert violations[0].excess == pytest.approx(0.1e9)

    def test_compute_overload(self, edge_pair):
        req = edge_request()
        violations = check_feasibility(edge_plan(req, allocated_cpu=25e9), req, edge_pair)
        assert [v.constraint for v in violations] == [Constraint.C1_COMPUTE]

    def test_existing_load_counts(self, diamond_net):
        req = make_request(0, 3, cpu=100.0, bandwidth=10.0)
        diamond_net.commit_allocation("background", {1: 60.0}, {}, {})
        violations = check_feasibility(diamond_plan(req), req, diamond_net)
        assert [(v.constraint, v.entity) for v in violations] == [(Constraint.C1_COMPUTE, "node 1")]

    def test_delay_bound(self, edge_pair):
        req = edge_request(delay_bound=0.05)
        violations = check_feasibility(edge_plan(req), req, edge_pair)
        assert [v.constraint for v in violations] == [Constraint.C3_DELAY]

    def test_flow_table_overflow(self, edge_pair):
        edge_pair.commit_allocation("background", {}, {}, {1: 1000.0})
        req = edge_request()
        violations = check_feasibility(edge_plan(req), req, edge_pair)
        assert [v.constraint for v in violations] == [Constraint.SWITCH_TABLE]

    def test_wireless_link_not_allowed(self):
        net = PhysicalNetwork()
        net.add_node(NodeKind.EDGE_COMPUTE, 20e9)
        net.add_node(NodeKind.SWITCHING, 1000, is_hub=True)
        net.add_link(0, 1, LinkKind.WIRELESS, 10e9)
        req = edge_request()
        violations = check_feasibility(edge_plan(req), req, net)
        assert [v.constraint for v in violations] == [Constraint.C2_BANDWIDTH]

    def test_broken_conservation(self, diamond_net):
        req = make_request(0, 3, cpu=100.0, bandwidth=10.0)
        plan = diamond_plan(req)
        plan.splits.boundaries[1] = np.array([[0.5], [0.4]])
        violations = check_feasibility(plan, req, diamond_net)
        assert violations
        assert all(v.constraint == Constraint.C4_INTEGRALITY for v in violations)

    def test_route_must_join_its_instances(self, diamond_net):
        req = make_request(0, 3, cpu=100.0, bandwidth=10.0)
        plan = diamond_plan(req)
        plan.routes[(0, 0, 0)] = [Route(Path((0, 2), (1,)), 5.0)]
        violations = check_feasibility(plan, req, diamond_net)
        assert any(v.constraint == Constraint.C4_INTEGRALITY and "does not join" in v.detail
                   for v in violations)

    def test_stage_count_mismatch(self, diamond_net):
        req = make_request(0, 3, length=2, cpu=100.0, bandwidth=10.0)
        plan = diamond_plan(make_request(0, 3, cpu=100.0, bandwidth=10.0))
        violations = check_feasibility(plan, req, diamond_net)
        assert [v.constraint for v in violations] == [Constraint.C4_INTEGRALITY]

    def test_instance_must_sit_on_an_ecn(self, diamond_net):
        req = make_request(0, 3, cpu=100.0, bandwidth=10.0)
        plan = diamond_plan(req)
        plan.instances[0].host = 0
        violations = check_feasibility(plan, req, diamond_net)
        assert any("not hosted on an ECN" in v.detail for v in violations)

    @pytest.mark.parametrize("seed", range(10))
    def test_random_plans_match_resource_sums(self, diamond_net, seed):
        """Verdict agrees with per-resource sums recomputed from scratch"""
        rng = np.random.default_rng(seed)
        diamond_net.commit_allocation(
            "background",
            {1: float(rng.uniform(0, 90)), 2: float(rng.uniform(0, 90))},
            {l: float(rng.uniform(0, 8)) for l in range(4)}, {},
        )
        req = make_request(0, 3, cpu=float(rng.uniform(1, 60)), bandwidth=float(rng.uniform(1, 12)))
        plan = diamond_plan(req, first=float(rng.uniform(0.1, 0.9)))

        first = plan.instances[0].share
        cpu_ok = all(
            diamond_net.nodes[host].compute_load + req.cpu_demand * share <= 100.0
            for host, share in ((1, first), (2, 1 - first))
        )
        link_ok = all(
            diamond_net.links[l].load + req.bandwidth_demand * share <= 10.0
            for l, share in ((0, first), (1, 1 - first), (2, first), (3, 1 - first))
        )
        violations = check_feasibility(plan, req, diamond_net)
        assert (not violations) == (cpu_ok and link_ok)


class TestAccounting:
    """Test apply_plan and release_plan"""

    def test_apply_charges_exact_amounts(self, edge_pair):
        req = edge_request()
        apply_plan(edge_pair, edge_plan(req))
        assert edge_pair.nodes[0].compute_load == 10e9
        assert edge_pair.links[0].load == 8e6
        assert edge_pair.nodes[1].switch_load == 1.0

    def test_apply_then_release_is_bit_identical(self, diamond_net):
        diamond_net.commit_allocation("background", {1: 0.1, 2: 0.7}, {0: 0.3, 3: 1.1}, {0: 2.0})
        before = diamond_net.load_snapshot()
        req = make_request(0, 3, cpu=30.0, bandwidth=3.0)
        plan = diamond_plan(req, first=1 / 3)
        apply_plan(diamond_net, plan)
        assert diamond_net.load_snapshot() != before
        release_plan(diamond_net, plan)
        assert diamond_net.load_snapshot() == before

    def test_total_link_load_is_sum_of_plans(self, diamond_net):
        rng = np.random.default_rng(5)
        expected = {l: [] for l in range(4)}
        for chain_id in range(10):
            req = make_request(0, 3, cpu=1.0, bandwidth=float(rng.uniform(0.1, 0.9)),
                               request_id=chain_id)
            plan = diamond_plan(req, first=float(rng.uniform(0.1, 0.9)))
            apply_plan(diamond_net, plan)
            for l, bw in plan.bandwidth_by_link().items():
                expected[l].append(bw)
        for l, amounts in expected.items():
            assert diamond_net.links[l].load == pytest.approx(math.fsum(amounts), rel=1e-12)

    def test_overload_leaves_network_untouched(self, edge_pair):
        req = edge_request(bandwidth=10.1e9)
        before = edge_pair.load_snapshot()
        with pytest.raises(InfeasiblePlanError):
            apply_plan(edge_pair, edge_plan(req))
        assert edge_pair.load_snapshot() == before

    def test_double_apply_and_unknown_release(self, edge_pair):
        req = edge_request()
        plan = edge_plan(req)
        apply_plan(edge_pair, plan)
        with pytest.raises(ValueError):
            apply_plan(edge_pair, plan)
        release_plan(edge_pair, plan)
        with pytest.raises(PlanNotAppliedError):
            release_plan(edge_pair, plan)


class TestRequests:
    def test_request_validation(self):
        with pytest.raises(ValueError):
            make_request(1, 1)
        with pytest.raises(ValueError):
            make_request(0, 1, cpu=0.0)

    def test_split_conservation_error(self):
        splits = SplitRatios([np.array([[0.5, 0.5]]), np.array([[0.5], [0.5]])])
        assert splits.conservation_error() == pytest.approx(0.0)
        assert list(splits.stage_shares(1)) == [0.5, 0.5]


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
