"""Bounded formation control of unicycle robots.

Tracking, potential-field collision avoidance and obstacle circumnavigation
for nonholonomic robots, with a deterministic fixed-step simulator.
"""

from .avoidance import Obstacle
from .dynamics import ControlInput, Pose
from .engine import RunMetrics, SimulationFault, StepRecord, compute_metrics, run
from .geometry import Vec2, bearing, distance, wrap_angle
from .potential import PotentialParams
from .scenario import Scenario, load_scenario, parse_scenario
from .supervisor import FormationSpec, Mode
from .tracking import TrackingGains

__all__ = [
    "ControlInput", "FormationSpec", "Mode", "Obstacle", "Pose", "PotentialParams",
    "RunMetrics", "Scenario", "SimulationFault", "StepRecord", "TrackingGains", "Vec2",
    "bearing", "compute_metrics", "distance", "load_scenario", "parse_scenario", "run",
    "wrap_angle",
]

__version__ = "0.1.0"
