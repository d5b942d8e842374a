"""
Applying and releasing deployment plans on the network loads
"""

import logging
from typing import Dict, Tuple

from ..network.topology import PhysicalNetwork
from ..network.types import LinkId, NodeId
from .feasibility import exceeds
from .types import DeploymentPlan

logger = logging.getLogger(__name__)


class InfeasiblePlanError(RuntimeError):
    """Raised when applying a plan would overload a resource; nothing was changed"""


class PlanNotAppliedError(LookupError):
    """Raised when releasing a plan that is not currently applied"""


def plan_resource_demands(net: PhysicalNetwork, plan: DeploymentPlan
                          ) -> Tuple[Dict[NodeId, float], Dict[LinkId, float], Dict[NodeId, float]]:
    """CPU per host, bandwidth per link and flow entries per switching node"""
    entries = {
        node_id: count for node_id, count in plan.entries_by_node().items()
        if not net.nodes[node_id].is_ecn
    }
    return plan.cpu_by_host(), plan.bandwidth_by_link(), entries


def apply_plan(net: PhysicalNetwork, plan: DeploymentPlan) -> PhysicalNetwork:
    """
    Charge a plan's allocations to the network

    Every capacity is checked before any load changes, so a rejected plan
    leaves the network untouched.

    Raises:
        InfeasiblePlanError: an ECN, link or flow table would overflow
        ValueError: the chain already has a plan applied
    """
    if net.has_owner(plan.chain_id):
        raise ValueError(f"Chain {plan.chain_id} already has a plan applied")
    cpu, bandwidth, entries = plan_resource_demands(net, plan)

    overloaded = []
    for host, amount in cpu.items():
        node = net.nodes[host]
        if exceeds(node.compute_load + amount, node.compute_capacity):
            overloaded.append(f"node {host} compute")
    for link_id, amount in bandwidth.items():
        link = net.links[link_id]
        if exceeds(link.load + amount, link.bandwidth):
            overloaded.append(f"link {link_id}")
    for node_id, amount in entries.items():
        node = net.nodes[node_id]
        if exceeds(node.switch_load + amount, node.switch_capacity):
            overloaded.append(f"node {node_id} flow table")
    if overloaded:
        raise InfeasiblePlanError(
            f"Chain {plan.chain_id} would overload: {', '.join(overloaded)}"
        )

    net.commit_allocation(plan.chain_id, cpu, bandwidth, entries)
    logger.debug(
        f"Applied chain {plan.chain_id}: {len(cpu)} host(s), {len(bandwidth)} link(s), "
        f"{len(entries)} switch(es)"
    )
    return net


def release_plan(net: PhysicalNetwork, plan: DeploymentPlan) -> PhysicalNetwork:
    """Undo apply_plan, restoring every touched load exactly"""
    if not net.has_owner(plan.chain_id):
        raise PlanNotAppliedError(f"Chain {plan.chain_id} has no applied plan")
    net.revoke_allocation(plan.chain_id)
    logger.debug(f"Released chain {plan.chain_id}")
    return net
