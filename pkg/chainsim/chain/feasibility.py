#!/usr/bin/env python3
"""
Constraint Checking for Deployment Plans
Verifies compute (C1), bandwidth (C2), delay (C3), integrality/structure (C4)
and flow-table capacity of a plan against the current network loads.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional

from .. import settings
from ..network.topology import PhysicalNetwork
from ..network.types import LinkKind
from .types import DelayModel, DeploymentPlan, Route, ServiceChainRequest

logger = logging.getLogger(__name__)

_CONSERVATION_RTOL = 1e-9


class Constraint(Enum):
    """Constraint families a plan can violate"""
    C1_COMPUTE = "C1_compute"
    C2_BANDWIDTH = "C2_bandwidth"
    C3_DELAY = "C3_delay"
    C4_INTEGRALITY = "C4_integrality"
    SWITCH_TABLE = "switch_table"


@dataclass
class ConstraintViolation:
    """One violated constraint on one entity (node, link, instance or chain)"""
    constraint: Constraint
    entity: str
    detail: str
    excess: float = 0.0


class MalformedPlanError(ValueError):
    """Raised when a plan is too broken to evaluate (e.g. zero allocated CPU)"""


def exceeds(load: float, capacity: float) -> bool:
    """Capacity test shared by the checker and the accounting layer"""
    return load > capacity * (1.0 + settings.CAPACITY_RTOL)


def _route_transit(route: Route, req: ServiceChainRequest, net: PhysicalNetwork) -> float:
    """Store-and-forward transit time of one sub-flow along its path"""
    data_bytes = req.data_size * route.bandwidth / req.bandwidth_demand
    return math.fsum(
        DelayModel.transit(data_bytes, net.links[link_id].bandwidth, net.links[link_id].prop_delay)
        for link_id in route.path.link_sequence
    )


def end_to_end_delay(plan: DeploymentPlan, req: ServiceChainRequest,
                     net: PhysicalNetwork) -> float:
    """
    Worst-case ingress-to-egress delay over every positive-flow instance chain

    Each instance starts once its slowest positive-flow predecessor has
    delivered; a pair's transit is the slowest of its routes; execution time
    is the instance's share of the stage CPU demand over its allocation.

    Args:
        plan: Structurally valid plan
        req: Request the plan serves
        net: Network providing link bandwidths and propagation delays

    Returns:
        Delay in seconds

    Raises:
        MalformedPlanError: non-positive allocated CPU, or no flow reaches the egress
    """
    for instance in plan.instances:
        if instance.allocated_cpu <= 0:
            raise MalformedPlanError(
                f"Chain {plan.chain_id}: instance {instance.index} of stage "
                f"{instance.stage} has allocated_cpu {instance.allocated_cpu}"
            )

    eps = settings.FLOW_EPS
    finish: Dict[int, Optional[float]] = {0: 0.0}  # per instance index of the previous stage
    for stage in range(1, plan.num_stages + 2):
        ratios = plan.splits.boundaries[stage - 1]
        shares = plan.splits.stage_shares(stage)
        current: Dict[int, Optional[float]] = {}
        for j_next in range(ratios.shape[1]):
            ready = None
            for j, done in finish.items():
                if done is None or ratios[j, j_next] <= eps:
                    continue
                routes = plan.routes.get((stage - 1, j, j_next), [])
                transit = max((_route_transit(r, req, net) for r in routes), default=0.0)
                arrival = done + transit
                ready = arrival if ready is None else max(ready, arrival)
            if ready is None or stage == plan.num_stages + 1:
                current[j_next] = ready
                continue
            instance = next(i for i in plan.instances if i.stage == stage and i.index == j_next)
            cpu_cycles = req.cpu_demand * float(shares[j_next])
            current[j_next] = ready + DelayModel.execution(cpu_cycles, instance.allocated_cpu)
        finish = current

    delay = finish.get(0)
    if delay is None:
        raise MalformedPlanError(f"Chain {plan.chain_id}: no positive flow reaches the egress")
    return delay


def _structure_violations(plan: DeploymentPlan, req: ServiceChainRequest,
                          net: PhysicalNetwork) -> List[ConstraintViolation]:
    """Placement integrality, split shapes, conservation and route consistency"""
    found: List[ConstraintViolation] = []

    def flag(entity: str, detail: str):
        found.append(ConstraintViolation(Constraint.C4_INTEGRALITY, entity, detail))

    chain = f"chain {plan.chain_id}"
    if plan.num_stages != req.chain_length:
        flag(chain, f"plan has {plan.num_stages} stages, request has {req.chain_length}")
        return found

    counts = [1] + [len(plan.stage_instances(m)) for m in range(1, plan.num_stages + 1)] + [1]
    for stage in range(1, plan.num_stages + 1):
        instances = plan.stage_instances(stage)
        if not instances:
            flag(f"{chain} stage {stage}", "stage has no instance")
        if [i.index for i in instances] != list(range(len(instances))):
            flag(f"{chain} stage {stage}", "instance indices are not 0..n-1")
        hosts = [i.host for i in instances]
        if len(set(hosts)) != len(hosts):
            flag(f"{chain} stage {stage}", "two instances of one stage share a host")
        for instance in instances:
            node = net.nodes.get(instance.host)
            if node is None or not node.is_ecn:
                flag(f"node {instance.host}", f"stage {stage} instance is not hosted on an ECN")
            if instance.allocated_cpu <= 0:
                flag(f"{chain} stage {stage}", f"instance {instance.index} has no CPU allocated")
    if any(i.stage < 1 or i.stage > plan.num_stages for i in plan.instances):
        flag(chain, "instance outside the chain's stages")
    if found:
        return found

    for b, ratios in enumerate(plan.splits.boundaries):
        if ratios.shape != (counts[b], counts[b + 1]):
            flag(f"{chain} boundary {b}",
                 f"split matrix shape {ratios.shape} != {(counts[b], counts[b + 1])}")
        elif (ratios < 0).any():
            flag(f"{chain} boundary {b}", "negative split ratio")
    if found:
        return found
    conservation = plan.splits.conservation_error()
    if conservation > _CONSERVATION_RTOL:
        flag(chain, f"flow conservation error {conservation:.3g}")

    eps = settings.FLOW_EPS
    for b, ratios in enumerate(plan.splits.boundaries):
        for j in range(ratios.shape[0]):
            for j_next in range(ratios.shape[1]):
                routes = plan.routes.get((b, j, j_next), [])
                flow = float(ratios[j, j_next]) * req.bandwidth_demand
                entity = f"{chain} pair {(b, j, j_next)}"
                if ratios[j, j_next] > eps and not routes:
                    flag(entity, "positive split without a route")
                    continue
                routed = math.fsum(r.bandwidth for r in routes)
                if abs(routed - flow) > _CONSERVATION_RTOL * max(req.bandwidth_demand, 1.0):
                    flag(entity, f"routes carry {routed:.6g} bps, split asks {flow:.6g}")
                src = plan.endpoint_host(b, j)
                dst = plan.endpoint_host(b + 1, j_next)
                for route in routes:
                    path = route.path
                    if route.bandwidth < 0:
                        flag(entity, "negative route bandwidth")
                    if path.source != src or path.target != dst:
                        flag(entity, f"route {path.node_sequence} does not join {src} to {dst}")
                    for (u, v), link_id in zip(zip(path.node_sequence, path.node_sequence[1:]),
                                               path.link_sequence):
                        link = net.links.get(link_id)
                        if link is None or set(link.endpoints) != {u, v}:
                            flag(entity, f"link {link_id} does not join {u} and {v}")
    return found


def _references_known(plan: DeploymentPlan, net: PhysicalNetwork) -> bool:
    """Whether every host and link the plan names exists, so resource sums are safe"""
    if any(i.host not in net.nodes for i in plan.instances):
        return False
    for route in plan.all_routes():
        if any(n not in net.nodes for n in route.path.node_sequence):
            return False
        if any(l not in net.links for l in route.path.link_sequence):
            return False
    return True


def check_feasibility(plan: DeploymentPlan, req: ServiceChainRequest,
                      net: PhysicalNetwork) -> List[ConstraintViolation]:
    """
    Check a plan against C1-C4 and flow-table capacity on the current loads

    Args:
        plan: Candidate plan (not yet applied)
        req: Request the plan serves
        net: Network with the loads of every previously applied plan

    Returns:
        Every violation found; an empty list means the plan is feasible
    """
    violations = _structure_violations(plan, req, net)
    structural = bool(violations)
    if not _references_known(plan, net):
        return violations

    for host, cpu in plan.cpu_by_host().items():
        node = net.nodes[host]
        total = node.compute_load + cpu
        if exceeds(total, node.compute_capacity):
            violations.append(ConstraintViolation(
                Constraint.C1_COMPUTE, f"node {host}",
                f"compute {total:.6g} > capacity {node.compute_capacity:.6g}",
                excess=total - node.compute_capacity,
            ))

    for link_id, bandwidth in plan.bandwidth_by_link().items():
        link = net.links[link_id]
        if link.kind != LinkKind.OPTICAL:
            violations.append(ConstraintViolation(
                Constraint.C2_BANDWIDTH, f"link {link_id}",
                "chain traffic routed over a non-optical link",
            ))
        total = link.load + bandwidth
        if exceeds(total, link.bandwidth):
            violations.append(ConstraintViolation(
                Constraint.C2_BANDWIDTH, f"link {link_id}",
                f"load {total:.6g} > bandwidth {link.bandwidth:.6g}",
                excess=total - link.bandwidth,
            ))

    for node_id, entries in plan.entries_by_node().items():
        node = net.nodes[node_id]
        if node.is_ecn:
            continue
        total = node.switch_load + entries
        if exceeds(total, node.switch_capacity):
            violations.append(ConstraintViolation(
                Constraint.SWITCH_TABLE, f"node {node_id}",
                f"flow entries {total:.6g} > table capacity {node.switch_capacity:.6g}",
                excess=total - node.switch_capacity,
            ))

    if not structural:
        delay = end_to_end_delay(plan, req, net)
        if delay > req.delay_bound:
            violations.append(ConstraintViolation(
                Constraint.C3_DELAY, f"chain {plan.chain_id}",
                f"end-to-end delay {delay:.6g}s > bound {req.delay_bound:.6g}s",
                excess=delay - req.delay_bound,
            ))

    if violations:
        logger.debug(f"Chain {plan.chain_id}: {len(violations)} constraint violation(s)")
    return violations
