"""
Shared types and dataclasses for the placement module
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

from .. import settings
from ..chain.types import DeploymentPlan, ObjectiveWeights
from ..network.types import NodeId
from ..solvers.types import LoadMode


class Algorithm(Enum):
    """Deployment algorithms the simulator can run"""
    GBMP = "gbmp"
    KSMP = "ksmp"
    ECMP = "ecmp"
    ILPS = "ilps"


class RejectReason(Enum):
    NO_CAPACITY = "NoCapacity"
    NO_PATH = "NoPath"
    DELAY_VIOLATION = "DelayViolation"
    LP_INFEASIBLE = "LpInfeasible"


@dataclass
class PlacementParams:
    """Knobs shared by the four algorithms"""
    max_paths: int = settings.MAX_PATHS  # MP
    weights: ObjectiveWeights = field(default_factory=ObjectiveWeights)
    candidate_pool_size: Optional[int] = None  # MP when unset
    bisection_tol: float = settings.BISECTION_TOL  # relative to the split demand
    load_mode: LoadMode = LoadMode.UTILIZATION
    ksmp_hop_cost: float = settings.KSMP_HOP_COST
    ilps_exact_ecns: int = settings.ILPS_EXACT_ECNS
    ilps_exact_stages: int = settings.ILPS_EXACT_STAGES
    ilps_beam_width: int = settings.ILPS_BEAM_WIDTH
    ilps_incumbent_width: int = settings.ILPS_INCUMBENT_WIDTH

    def __post_init__(self):
        if self.max_paths < 1:
            raise ValueError("max_paths (MP) must be at least 1")
        if self.candidate_pool_size is not None and self.candidate_pool_size < 1:
            raise ValueError("candidate_pool_size must be at least 1")
        if self.bisection_tol <= 0:
            raise ValueError("bisection_tol must be positive")
        if self.ksmp_hop_cost < 0:
            raise ValueError("ksmp_hop_cost must be nonnegative")
        if min(self.ilps_exact_ecns, self.ilps_exact_stages, self.ilps_beam_width,
               self.ilps_incumbent_width) < 1:
            raise ValueError("ILPS search limits must be at least 1")

    @property
    def pool_size(self) -> int:
        """Candidates considered per stage, never more than MP"""
        return min(self.max_paths, self.candidate_pool_size or self.max_paths)


@dataclass
class CandidateSet:
    """Alternative hosts of one stage, best weight first"""
    stage: int
    entries: List[Tuple[NodeId, float]] = field(default_factory=list)

    def __post_init__(self):
        weights = [w for _, w in self.entries]
        if any(a < b for a, b in zip(weights, weights[1:])):
            raise ValueError(f"Candidate set of stage {self.stage} is not sorted by weight")

    @property
    def nodes(self) -> List[NodeId]:
        return [node for node, _ in self.entries]

    def __len__(self) -> int:
        return len(self.entries)


@dataclass
class PlacementOutcome:
    """Either an accepted plan (already applied) or a rejection reason"""
    plan: Optional[DeploymentPlan] = None
    reason: Optional[RejectReason] = None
    detail: str = ""

    @property
    def accepted(self) -> bool:
        return self.plan is not None

    @classmethod
    def accept(cls, plan: DeploymentPlan) -> "PlacementOutcome":
        return cls(plan=plan)

    @classmethod
    def reject(cls, reason: RejectReason, detail: str = "") -> "PlacementOutcome":
        return cls(reason=reason, detail=detail)
