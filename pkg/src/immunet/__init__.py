"""Artificial-immune-system network security simulator.

Mobile detector, ant, monitor, and disinfector cells defend a simulated
packet network against worm attacks; everything is deterministic under a
run seed and replayable from the event log.
"""

from .engine import RunResult, World, run
from .metrics import Metrics, compute_metrics
from .scenario import ScenarioConfig, baseline_scenario, load_scenario

__version__ = "0.1.0"

__all__ = [
    "Metrics",
    "RunResult",
    "ScenarioConfig",
    "World",
    "baseline_scenario",
    "compute_metrics",
    "load_scenario",
    "run",
    "__version__",
]
