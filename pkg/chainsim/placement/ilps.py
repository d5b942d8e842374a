#!/usr/bin/env python3
"""
Single-Path Exact Baseline (ILPS)
One instance per stage and one path per hop, no splitting. Each host pair
is joined by its first hop-shortest path (lexicographic) that can carry
the whole flow. Partial plans are expanded stage by stage as numpy rows
and pruned on capacity, delay and a lower bound of the composite load
balance objective against an incumbent found by a narrow beam, so the
plan returned is the exact minimum. Beyond ``ilps_exact_ecns`` ECNs or
``ilps_exact_stages`` stages the search becomes a beam search.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Set, Tuple

import numpy as np

from ..chain.feasibility import exceeds
from ..chain.types import DelayModel, Route, ServiceChainRequest
from ..network.algorithms import equal_cost_paths
from ..network.topology import PhysicalNetwork
from ..network.types import NodeId, Path
from .state import PlacementRejected, PlanBuilder, Planner, WorkingState
from .types import PlacementOutcome, PlacementParams, RejectReason

logger = logging.getLogger(__name__)

_warned_sizes: Set[Tuple[int, int]] = set()

# slack on the bound comparisons
BOUND_EPS = 1e-12


@dataclass
class _Frontier:
    """Partial plans, one row each: hosts so far and the resources they add"""
    hosts: np.ndarray  # (rows, stages placed), ECN positions
    cpu: np.ndarray  # (rows, ECNs)
    bandwidth: np.ndarray  # (rows, links)
    entries: np.ndarray  # (rows, switches)
    delay: np.ndarray  # (rows,)

    def __len__(self) -> int:
        return self.delay.shape[0]

    def take(self, index) -> "_Frontier":
        return _Frontier(self.hosts[index], self.cpu[index], self.bandwidth[index],
                         self.entries[index], self.delay[index])

    @classmethod
    def root(cls, n_ecns: int, n_links: int, n_switches: int) -> "_Frontier":
        return cls(np.zeros((1, 0), dtype=int), np.zeros((1, n_ecns)), np.zeros((1, n_links)),
                   np.zeros((1, n_switches)), np.zeros(1))

    @classmethod
    def concat(cls, parts: List["_Frontier"]) -> "_Frontier":
        return cls(*(np.concatenate([getattr(p, name) for p in parts])
                     for name in ("hosts", "cpu", "bandwidth", "entries", "delay")))


def _peak_ratios(util: np.ndarray) -> np.ndarray:
    """Row-wise max/mean, 1.0 where the mean is not positive"""
    if util.shape[1] == 0:
        return np.ones(util.shape[0])
    return _ratio(util.max(axis=1), util.mean(axis=1))


def _ratio(peak: np.ndarray, mean: np.ndarray) -> np.ndarray:
    out = np.ones_like(peak)
    np.divide(peak, mean, out=out, where=mean > 0)
    return out


def water_filled_std(util: np.ndarray, budget: float) -> np.ndarray:
    """
    Smallest population std reachable by adding at most ``budget`` in total
    to each row's entries

    The minimum raises the lowest entries to a common level.

    Args:
        util: (rows, n) utilizations
        budget: Total that may be added per row, nonnegative

    Returns:
        (rows,) standard deviations
    """
    rows, n = util.shape
    if n == 0:
        return np.zeros(rows)
    x = np.sort(util, axis=1)
    levels = (budget + np.cumsum(x, axis=1)) / np.arange(1, n + 1)
    stop = np.concatenate([levels[:, :-1] <= x[:, 1:], np.ones((rows, 1), dtype=bool)], axis=1)
    level = levels[np.arange(rows), stop.argmax(axis=1)]
    return np.maximum(x, level[:, None]).std(axis=1)


class IlpsPlanner(Planner):
    """Exact single-path search minimizing the composite objective"""

    name = "ILPS"

    def prepare(self, req: ServiceChainRequest, state: WorkingState) -> List[int]:
        """Load the current state and pair paths; the ECN positions that fit one stage"""
        net = state.net
        self._req = req
        self._pruned = {"capacity": False, "delay": False, "path": False}
        self._ecns = net.ecn_ids
        switches = net.switch_ids
        links = sorted(net.links)
        switch_index = {n: i for i, n in enumerate(switches)}
        link_index = {l: i for i, l in enumerate(links)}

        self._ecn_cap = np.array([net.nodes[n].compute_capacity for n in self._ecns])
        self._ecn_util = np.array([net.nodes[n].compute_load for n in self._ecns]) / self._ecn_cap
        self._link_bw = np.array([net.links[l].bandwidth for l in links])
        self._link_util = np.array([net.links[l].load for l in links]) / self._link_bw
        self._switch_cap = np.array([net.nodes[n].switch_capacity for n in switches])
        self._switch_util = np.array([net.nodes[n].switch_load for n in switches]) / self._switch_cap
        self._res_cpu = np.array([state.residual_cpu[n] for n in self._ecns])
        self._res_bw = np.array([state.residual_bw[l] for l in links])
        self._res_entries = np.array([state.residual_entries[n] for n in switches])
        self._egress_switch = switch_index.get(req.egress)

        # sources: ingress then ECNs; targets: ECNs then egress
        sources = [req.ingress] + self._ecns
        targets = self._ecns + [req.egress]
        shape = (len(sources), len(targets))
        self._pair_ok = np.zeros(shape, dtype=bool)
        self._pair_links = np.zeros(shape + (len(links),))
        self._pair_switches = np.zeros(shape + (len(switches),))
        self._pair_transit = np.zeros(shape)
        self._pair_paths: Dict[Tuple[int, int], Path] = {}
        self._max_hops = 0
        for i, src in enumerate(sources):
            for j, dst in enumerate(targets):
                path = self._pair_path(state, src, dst)
                if path is None:
                    continue
                self._pair_ok[i, j] = True
                self._pair_paths[(i, j)] = path
                self._max_hops = max(self._max_hops, path.hops)
                for link_id in path.link_sequence:
                    self._pair_links[i, j, link_index[link_id]] = req.bandwidth_demand
                    link = net.links[link_id]
                    self._pair_transit[i, j] += DelayModel.transit(req.data_size, link.bandwidth,
                                                                   link.prop_delay)
                if path.hops:
                    for node_id in path.node_sequence:
                        if node_id in switch_index:
                            self._pair_switches[i, j, switch_index[node_id]] = 1.0

        hosts = [i for i in range(len(self._ecns)) if not exceeds(req.cpu_demand, self._res_cpu[i])]
        if hosts:
            between = self._pair_switches[1:, :-1][np.ix_(hosts, hosts)]
            self._pair_switch_max = float(between.sum(axis=2).max())
            self._egress_switch_max = float(self._pair_switches[1:, -1][hosts].sum(axis=1).max())
        return hosts

    def root(self) -> _Frontier:
        """The empty partial plan"""
        return _Frontier.root(len(self._ecns), len(self._res_bw), len(self._res_entries))

    def _pair_path(self, state: WorkingState, src: NodeId, dst: NodeId) -> Optional[Path]:
        """First hop-shortest path wide enough for the whole flow"""
        if src == dst:
            return Path.trivial(src)
        shortest = equal_cost_paths(state.net, src, dst)
        if not shortest:
            self._pruned["path"] = True
            return None
        for path in shortest:
            if not exceeds(self._req.bandwidth_demand, state.bottleneck(path)) \
                    and state.has_entries(path):
                return path
        self._pruned["capacity"] = True
        return None

    def expand(self, frontier: _Frontier, stage: int, hosts: List[int],
               keep: Optional[Callable[[_Frontier, int], np.ndarray]] = None) -> _Frontier:
        """Every feasible one-stage extension of every row, optionally filtered by ``keep``"""
        req = self._req
        final = stage == req.chain_length + 1
        if stage == 1:
            sources = np.zeros(len(frontier), dtype=int)
        else:
            sources = frontier.hosts[:, -1] + 1
        targets = [len(self._ecns)] if final else hosts

        parts = []
        for target in targets:
            rows = np.flatnonzero(self._pair_ok[sources, target])
            if rows.size == 0:
                continue
            src = sources[rows]
            cpu = frontier.cpu[rows].copy()
            bandwidth = frontier.bandwidth[rows] + self._pair_links[src, target]
            entries = frontier.entries[rows] + self._pair_switches[src, target]
            delay = frontier.delay[rows] + self._pair_transit[src, target]
            fits = ~exceeds(bandwidth, self._res_bw).any(axis=1) & \
                ~exceeds(entries, self._res_entries).any(axis=1)
            if final:
                placed = frontier.hosts[rows]
            else:
                cpu[:, target] += req.cpu_demand
                fits &= ~exceeds(cpu[:, target], self._res_cpu[target])
                delay += DelayModel.execution(req.cpu_demand, req.cpu_demand)
                placed = np.column_stack([frontier.hosts[rows], np.full(rows.size, target)])
            if not fits.all():
                self._pruned["capacity"] = True
            on_time = delay <= req.delay_bound
            if (fits & ~on_time).any():
                self._pruned["delay"] = True
            mask = fits & on_time
            if not mask.any():
                continue
            part = _Frontier(placed[mask], cpu[mask], bandwidth[mask], entries[mask], delay[mask])
            if keep is not None:
                part = part.take(keep(part, stage))
            if len(part):
                parts.append(part)
        if not parts:
            return self.root().take(np.zeros(0, dtype=int))
        return _Frontier.concat(parts)

    def objective(self, frontier: _Frontier) -> np.ndarray:
        """Composite objective of each row's plan on top of the current loads"""
        w = self.params.weights
        ecn = self._ecn_util + frontier.cpu / self._ecn_cap
        links = self._link_util + frontier.bandwidth / self._link_bw
        switches = self._switch_util + frontier.entries / self._switch_cap
        spread = links.std(axis=1) if links.shape[1] else np.zeros(len(frontier))
        return w.alpha * _peak_ratios(ecn) + w.beta * spread + w.gamma * _peak_ratios(switches)

    def lower_bound(self, frontier: _Frontier, stage: int) -> np.ndarray:
        """
        Objective no completion of each row can beat

        ECN and switch peaks can only grow while their means are capped by
        the resources the remaining stages and paths can add. The link
        spread is bounded by water-filling that extra bandwidth.
        """
        req, w = self._req, self.params.weights
        remaining_stages = req.chain_length - stage
        remaining_paths = req.chain_length + 1 - stage

        ecn = self._ecn_util + frontier.cpu / self._ecn_cap
        ecn_mean = (ecn.sum(axis=1) + remaining_stages * req.cpu_demand / self._ecn_cap.min()) \
            / ecn.shape[1]
        lbi_c = _ratio(ecn.max(axis=1), ecn_mean)

        lbi_s = np.ones(len(frontier))
        if self._switch_cap.size:
            switches = self._switch_util + frontier.entries / self._switch_cap
            peak = switches.max(axis=1)
            eg = self._egress_switch
            if eg is not None:
                peak = np.maximum(peak, self._switch_util[eg] +
                                  (frontier.entries[:, eg] + 1.0) / self._switch_cap[eg])
            added = (remaining_paths - 1) * self._pair_switch_max + self._egress_switch_max
            switch_mean = (switches.sum(axis=1) + added / self._switch_cap.min()) / switches.shape[1]
            lbi_s = _ratio(peak, switch_mean)

        lbi_n = np.zeros(len(frontier))
        if self._link_bw.size:
            links = self._link_util + frontier.bandwidth / self._link_bw
            budget = remaining_paths * self._max_hops * req.bandwidth_demand / self._link_bw.min()
            lbi_n = water_filled_std(links, budget)
        return w.alpha * lbi_c + w.beta * lbi_n + w.gamma * lbi_s

    def beam(self, hosts: List[int], width: int) -> Optional[Tuple[float, _Frontier]]:
        """Keep the ``width`` best partial plans per stage; the best complete plan or None"""
        frontier = self.root()
        for stage in range(1, self._req.chain_length + 2):
            frontier = self.expand(frontier, stage, hosts)
            if not len(frontier):
                return None
            if len(frontier) > width:
                order = np.argsort(np.round(self.objective(frontier), 12), kind="stable")
                frontier = frontier.take(order[:width])
        values = self.objective(frontier)
        best = int(np.argmin(values))
        return float(values[best]), frontier.take([best])

    def branch_and_bound(self, hosts: List[int],
                         incumbent: Optional[Tuple[float, _Frontier]]) -> Optional[Tuple[float, _Frontier]]:
        """Exact search: drop every row whose lower bound exceeds the incumbent"""
        bound = incumbent[0] if incumbent else np.inf

        def promising(part: _Frontier, stage: int) -> np.ndarray:
            return np.flatnonzero(self.lower_bound(part, stage) <= bound + BOUND_EPS)

        frontier = self.root()
        for stage in range(1, self._req.chain_length + 1):
            frontier = self.expand(frontier, stage, hosts, keep=promising)
            if not len(frontier):
                return incumbent
        complete = self.expand(frontier, self._req.chain_length + 1, hosts)
        if not len(complete):
            return incumbent
        values = self.objective(complete)
        best = int(np.argmin(values))
        if incumbent is None or values[best] < incumbent[0] - BOUND_EPS:
            return float(values[best]), complete.take([best])
        return incumbent

    def search(self, req: ServiceChainRequest, state: WorkingState) -> Optional[_Frontier]:
        """The single best row, or None when no single-path plan fits"""
        hosts = self.prepare(req, state)
        if not hosts:
            self._pruned["capacity"] = True
            return None

        size = (len(self._ecns), req.chain_length)
        if size[0] <= self.params.ilps_exact_ecns and size[1] <= self.params.ilps_exact_stages:
            found = self.beam(hosts, self.params.ilps_incumbent_width) or \
                self.beam(hosts, self.params.ilps_beam_width)
            found = self.branch_and_bound(hosts, found)
        else:
            if size not in _warned_sizes:
                _warned_sizes.add(size)
                logger.warning(
                    f"ILPS: {size[0]} ECNs x {size[1]} stages exceed the exact search limits "
                    f"({self.params.ilps_exact_ecns} x {self.params.ilps_exact_stages}); "
                    f"using beam search (width {self.params.ilps_beam_width})"
                )
            found = self.beam(hosts, self.params.ilps_beam_width)
        return found[1] if found else None

    def build(self, req: ServiceChainRequest, net: PhysicalNetwork,
              state: WorkingState, builder: PlanBuilder):
        best = self.search(req, state)
        if best is None:
            pruned = self._pruned
            if pruned["delay"] and not pruned["capacity"] and not pruned["path"]:
                reason = RejectReason.DELAY_VIOLATION
            elif pruned["path"] and not pruned["capacity"]:
                reason = RejectReason.NO_PATH
            else:
                reason = RejectReason.NO_CAPACITY
            raise PlacementRejected(reason, "no single-path placement fits")

        positions = [int(p) for p in best.hosts[0]]
        stops = [0] + [p + 1 for p in positions]
        ends = positions + [len(self._ecns)]
        for position in positions:
            builder.add_stage([self._ecns[position]], [1.0])
        builder.add_egress()
        for boundary, (src, dst) in enumerate(zip(stops, ends)):
            builder.add_routes(boundary, 0, 0, [Route(path=self._pair_paths[(src, dst)],
                                                      bandwidth=req.bandwidth_demand)])
            builder.set_boundary(boundary, np.ones((1, 1)))
        logger.debug(f"ILPS chain {req.id}: hosts {[self._ecns[p] for p in positions]}, "
                     f"delay {float(best.delay[0]):.6g}s")


def ilps_deploy(req: ServiceChainRequest, net: PhysicalNetwork,
                params: Optional[PlacementParams] = None) -> PlacementOutcome:
    """Deploy one request with ILPS; accepted plans are applied to ``net``"""
    return IlpsPlanner(params).deploy(req, net)
