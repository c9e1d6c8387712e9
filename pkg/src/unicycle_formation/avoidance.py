"""Force-driven avoidance law, obstacle projection and tangential headings."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .dynamics import ControlInput, Pose
from .geometry import Vec2, bearing, wrap_angle
from .tracking import TrackingGains

EPS_FORCE = 1e-9


class InsideObstacleError(ValueError):
    pass


@dataclass(frozen=True)
class Obstacle:
    center: Vec2
    radius: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.radius) and self.radius > 0):
            raise ValueError("obstacle radius must be positive")

    def surface_distance(self, p: Vec2) -> float:
        dx = p.x - self.center.x
        dy = p.y - self.center.y
        return math.sqrt(dx * dx + dy * dy) - self.radius


@dataclass(frozen=True)
class AvoidanceReference:
    theta_d: float | None
    D: float


def avoidance_reference(F: Vec2) -> AvoidanceReference:
    """Desired heading along the net repulsive force, and its magnitude.

    The heading follows ``F`` itself, which is the descent direction of the
    summed potential; the heading is None when the force vanishes.
    """
    D = F.norm()
    if D < EPS_FORCE:
        return AvoidanceReference(None, D)
    return AvoidanceReference(math.atan2(F.y, F.x), D)


def avoidance_law(gains: TrackingGains, e_theta: float, D: float) -> ControlInput:
    u = -gains.K_theta * e_theta
    v = gains.K * math.cos(e_theta) * min(gains.D_max, D)
    return ControlInput(v=v, u=u)


def obstacle_projection(p: Vec2, obs: Obstacle) -> Vec2:
    """Nearest point of the obstacle boundary to `p` (the virtual robot)."""
    dx = p.x - obs.center.x
    dy = p.y - obs.center.y
    d = math.sqrt(dx * dx + dy * dy)
    if d <= obs.radius:
        raise InsideObstacleError("agent inside obstacle")
    w = obs.radius / d
    return Vec2(w * p.x + (1.0 - w) * obs.center.x, w * p.y + (1.0 - w) * obs.center.y)


def circumnavigation_heading(pose: Pose, obs: Obstacle, ref_point: Vec2) -> float:
    """Tangential heading used to slip past an obstacle toward `ref_point`.

    ``gamma`` is the obstacle's bearing relative to the robot heading and
    ``beta`` the absolute bearing of the reference. A positive ``gamma``
    (obstacle on the left) turns the robot clockwise, otherwise
    counter-clockwise.
    """
    if obs.surface_distance(pose.position) <= 0:
        raise InsideObstacleError("agent inside obstacle")
    gamma = wrap_angle(bearing(pose.position, obs.center) - pose.heading)
    beta = bearing(pose.position, ref_point)
    if gamma > 0:
        return wrap_angle(-math.pi / 2 + gamma + beta)
    return wrap_angle(math.pi / 2 + gamma + beta)
