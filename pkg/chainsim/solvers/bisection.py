"""
Greedy-bisection min-max splitter

Splits a demand over candidates so the most loaded candidate afterwards is
as lightly loaded as possible: bisect on the common load level L and, at
each L, greedily give every candidate what it can absorb below L.
"""

import logging
import math
from typing import List, Optional

from .types import LoadMode, SplitProblem, SplitSolution

logger = logging.getLogger(__name__)

MAX_ITERATIONS = 200


def _scales(p: SplitProblem, mode: LoadMode) -> List[float]:
    if mode == LoadMode.ABSOLUTE:
        return [1.0] * len(p.candidates)
    # a zero-capacity candidate has no headroom, any positive scale works
    return [c.capacity if c.capacity > 0 else 1.0 for c in p.candidates]


def greedy_bisection_minmax(p: SplitProblem, tol: Optional[float] = None,
                            mode: LoadMode = LoadMode.ABSOLUTE) -> SplitSolution:
    """
    Minimize max_j (u_j + x_j) / s_j subject to sum x_j = demand, 0 <= x_j <= cap_j

    Args:
        p: Split problem (shared caps are not supported here)
        tol: Absolute tolerance on the assigned amount; 1e-6 x demand when omitted
        mode: ABSOLUTE (s_j = 1) or UTILIZATION (s_j = capacity_j)

    Returns:
        SplitSolution whose objective is the reached max level, or an
        infeasible solution when the candidates cannot absorb the demand
    """
    if p.shared_caps:
        raise ValueError("greedy_bisection_minmax does not support shared caps")
    tol = 1e-6 * p.demand if tol is None else tol
    if tol <= 0:
        raise ValueError("tol must be positive")

    loads = [c.load for c in p.candidates]
    caps = [max(0.0, c.headroom) for c in p.candidates]
    scales = _scales(p, mode)
    n = len(p.candidates)

    if math.fsum(caps) < p.demand * (1.0 - 1e-12):
        return SplitSolution.infeasible(
            n, f"candidates absorb {math.fsum(caps):.6g} of demand {p.demand:.6g}"
        )

    def fill(level: float) -> List[float]:
        return [min(cap, max(0.0, level * s - u)) for u, cap, s in zip(loads, caps, scales)]

    low = max(u / s for u, s in zip(loads, scales))
    high = max((u + min(cap, p.demand)) / s for u, cap, s in zip(loads, caps, scales))
    level_tol = tol / max(scales)

    for _ in range(MAX_ITERATIONS):
        if high - low <= level_tol:
            break
        mid = 0.5 * (low + high)
        if math.fsum(fill(mid)) >= p.demand:
            high = mid
        else:
            low = mid

    # water-fill to exactly the demand, earlier candidates first
    remaining = p.demand
    amounts = []
    for available in fill(high):
        take = min(available, remaining)
        amounts.append(take)
        remaining -= take
    if remaining > 0:
        # rounding residue; the last candidate with headroom absorbs it
        for j in reversed(range(n)):
            if caps[j] - amounts[j] > 0:
                amounts[j] += min(remaining, caps[j] - amounts[j])
                break

    ratios = [x / p.demand for x in amounts]
    objective = max((u + x) / s for u, x, s in zip(loads, amounts, scales))
    logger.debug(f"Bisection split {p.demand:.6g} over {n} candidate(s): level {objective:.6g}")
    return SplitSolution(ratios=ratios, objective_value=objective)
