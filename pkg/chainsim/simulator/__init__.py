"""
Scenario-driven experiment engine
"""

from .scenarios import ScenarioConfig, ScenarioKind, generate_requests
from .engine import SimulationPoint, SimulationResult, release_all, run_simulation, sweep

__all__ = [
    "ScenarioConfig",
    "ScenarioKind",
    "generate_requests",
    "SimulationPoint",
    "SimulationResult",
    "release_all",
    "run_simulation",
    "sweep",
]
