"""
Numeric kernels behind the multipath heuristics
"""

from .types import (
    LoadMode,
    LpResult,
    LpStatus,
    SharedCap,
    SplitCandidate,
    SplitProblem,
    SplitSolution,
)
from .bisection import greedy_bisection_minmax
from .simplex import linprog_bland, simplex_min_cost

__all__ = [
    "LoadMode",
    "LpResult",
    "LpStatus",
    "SharedCap",
    "SplitCandidate",
    "SplitProblem",
    "SplitSolution",
    "greedy_bisection_minmax",
    "linprog_bland",
    "simplex_min_cost",
]
