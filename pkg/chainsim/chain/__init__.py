"""
Service chains, deployment plans, constraint checks and load indicators
"""

from .types import (
    DEFAULT_VNF_CATALOG,
    DelayModel,
    DeploymentPlan,
    LoadBalanceIndicators,
    ObjectiveWeights,
    Route,
    RouteKey,
    ServiceChainRequest,
    SplitRatios,
    VnfInstance,
    VnfKind,
    trivial_splits,
)
from .indicators import composite_objective, compute_lbi, lbi_from_utilizations, network_utilization
from .feasibility import (
    Constraint,
    ConstraintViolation,
    MalformedPlanError,
    check_feasibility,
    end_to_end_delay,
)
from .accounting import (
    InfeasiblePlanError,
    PlanNotAppliedError,
    apply_plan,
    plan_resource_demands,
    release_plan,
)

__all__ = [
    "DEFAULT_VNF_CATALOG",
    "DelayModel",
    "DeploymentPlan",
    "LoadBalanceIndicators",
    "ObjectiveWeights",
    "Route",
    "RouteKey",
    "ServiceChainRequest",
    "SplitRatios",
    "VnfInstance",
    "VnfKind",
    "trivial_splits",
    "composite_objective",
    "compute_lbi",
    "lbi_from_utilizations",
    "network_utilization",
    "Constraint",
    "ConstraintViolation",
    "MalformedPlanError",
    "check_feasibility",
    "end_to_end_delay",
    "InfeasiblePlanError",
    "PlanNotAppliedError",
    "apply_plan",
    "plan_resource_demands",
    "release_plan",
]
