"""
Shared types and dataclasses for the solvers module
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Sequence

import numpy as np


class LoadMode(Enum):
    """How the min-max splitter measures a candidate's load"""
    ABSOLUTE = "absolute"  # u + x
    UTILIZATION = "utilization"  # (u + x) / capacity


class LpStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass
class SplitCandidate:
    """One place the demand can go: its load, capacity, unit cost and path cap"""
    load: float
    capacity: float
    unit_cost: float = 0.0
    link_cap: float = math.inf  # max assignable amount in demand units

    def __post_init__(self):
        if self.load < 0 or self.capacity < 0:
            raise ValueError("Candidate load and capacity must be nonnegative")
        if self.capacity < self.load:
            raise ValueError(f"Candidate load {self.load} exceeds its capacity {self.capacity}")
        if self.link_cap < 0:
            raise ValueError("link_cap must be nonnegative")

    @property
    def headroom(self) -> float:
        """Largest amount this candidate can take"""
        return min(self.link_cap, self.capacity - self.load)


@dataclass
class SharedCap:
    """A resource several candidates draw from (a common link or endpoint)"""
    members: Sequence[int]
    limit: float

    def __post_init__(self):
        self.members = tuple(self.members)
        if not self.members:
            raise ValueError("A shared cap needs at least one member")
        if self.limit < 0:
            raise ValueError("Shared cap limit must be nonnegative")


@dataclass
class SplitProblem:
    """Split ``demand`` over candidates"""
    candidates: List[SplitCandidate]
    demand: float
    shared_caps: List[SharedCap] = field(default_factory=list)

    def __post_init__(self):
        if not self.candidates:
            raise ValueError("A split problem needs at least one candidate")
        if self.demand <= 0:
            raise ValueError("Split demand must be positive")
        for cap in self.shared_caps:
            if any(m < 0 or m >= len(self.candidates) for m in cap.members):
                raise ValueError(f"Shared cap members {cap.members} out of range")


@dataclass
class SplitSolution:
    """Split ratios summing to 1, or an infeasibility verdict with its reason"""
    ratios: List[float]
    objective_value: float
    feasible: bool = True
    reason: Optional[str] = None

    @classmethod
    def infeasible(cls, size: int, reason: str) -> "SplitSolution":
        return cls(ratios=[0.0] * size, objective_value=math.inf, feasible=False, reason=reason)


@dataclass
class LpResult:
    status: LpStatus
    x: Optional[np.ndarray] = None
    objective: float = math.nan

    @property
    def optimal(self) -> bool:
        return self.status == LpStatus.OPTIMAL
